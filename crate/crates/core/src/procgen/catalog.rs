//! The shipped item catalog: categories, themes and colour palettes.

use std::collections::{BTreeMap, HashSet};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::ProcgenError;
use crate::tasks::TaskKind;

pub const CATALOG_SCHEMA_VERSION: u32 = 1;

const SHIPPED: &str = include_str!("../../data/catalog.json");

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CatalogItem {
    pub name: String,
    pub plural: String,
    pub sprite: String,
    pub color: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight_kg: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub height_cm: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Category {
    pub name: String,
    pub singular: String,
    pub items: Vec<CatalogItem>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Theme {
    pub name: String,
    pub floor: Vec<String>,
    pub decor: String,
    pub decor_color: String,
    pub categories: Vec<String>,
    pub tasks: Vec<TaskKind>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Catalog {
    pub schema_version: u32,
    pub catalog_version: String,
    #[serde(default)]
    pub notes: String,
    pub categories: Vec<Category>,
    pub themes: Vec<Theme>,
    pub palette: BTreeMap<String, String>,
    pub basket_colors: Vec<String>,
    pub key_colors: Vec<String>,
}

pub fn parse_hex(s: &str) -> Option<[u8; 3]> {
    let h = s.strip_prefix('#')?;
    if h.len() != 6 {
        return None;
    }
    let v = u32::from_str_radix(h, 16).ok()?;
    Some([(v >> 16) as u8, (v >> 8) as u8, v as u8])
}

impl Catalog {
    /// The catalog compiled into the crate.
    pub fn shipped() -> &'static Catalog {
        static CAT: OnceLock<Catalog> = OnceLock::new();
        CAT.get_or_init(|| Catalog::from_json(SHIPPED).expect("shipped catalog is valid"))
    }

    pub fn from_json(text: &str) -> Result<Catalog, ProcgenError> {
        let cat: Catalog =
            serde_json::from_str(text).map_err(|e| ProcgenError::Catalog(e.to_string()))?;
        cat.validate()?;
        Ok(cat)
    }

    pub fn load(path: &std::path::Path) -> Result<Catalog, ProcgenError> {
        let text =
            std::fs::read_to_string(path).map_err(|e| ProcgenError::Catalog(e.to_string()))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<(), ProcgenError> {
        let bad = |m: String| Err(ProcgenError::Catalog(m));
        if self.schema_version != CATALOG_SCHEMA_VERSION {
            return bad(format!("unsupported schema version {}", self.schema_version));
        }
        for c in &self.categories {
            if c.items.len() < 8 {
                return bad(format!("category {} has fewer than 8 items", c.name));
            }
            let mut names = HashSet::new();
            for i in &c.items {
                if !names.insert(&i.name) {
                    return bad(format!("duplicate item {} in {}", i.name, c.name));
                }
                if parse_hex(&i.color).is_none() {
                    return bad(format!("item {} has bad colour {}", i.name, i.color));
                }
                if c.name == "animals" && (i.weight_kg.is_none() || i.height_cm.is_none()) {
                    return bad(format!("animal {} lacks weight or height", i.name));
                }
            }
        }
        if self.category("animals").is_none() {
            return bad("no animals category".into());
        }
        for (name, hex) in &self.palette {
            if parse_hex(hex).is_none() {
                return bad(format!("palette colour {name} has bad value {hex}"));
            }
        }
        let in_palette = |c: &String| self.palette.contains_key(c);
        if self.basket_colors.len() < 4 || !self.basket_colors.iter().all(in_palette) {
            return bad("need 4 basket colours from the palette".into());
        }
        if self.key_colors.len() < 6 || !self.key_colors.iter().all(in_palette) {
            return bad("need 6 key colours from the palette".into());
        }
        for t in &self.themes {
            for c in &t.categories {
                if self.category(c).is_none() {
                    return bad(format!("theme {} names unknown category {c}", t.name));
                }
            }
            if t.floor.is_empty() || !t.floor.iter().all(|f| parse_hex(f).is_some()) {
                return bad(format!("theme {} has bad floor colours", t.name));
            }
        }
        for kind in TaskKind::ALL {
            if self.themes_for(kind).is_empty() {
                return bad(format!("no theme supports {kind}"));
            }
        }
        Ok(())
    }

    pub fn category(&self, name: &str) -> Option<&Category> {
        self.categories.iter().find(|c| c.name == name)
    }

    pub fn theme(&self, name: &str) -> Option<&Theme> {
        self.themes.iter().find(|t| t.name == name)
    }

    pub fn themes_for(&self, kind: TaskKind) -> Vec<&Theme> {
        self.themes.iter().filter(|t| t.tasks.contains(&kind)).collect()
    }

    pub fn item(&self, category: &str, name: &str) -> Option<&CatalogItem> {
        self.category(category)?.items.iter().find(|i| i.name == name)
    }

    /// Every (category, item) pair.
    pub fn all_items(&self) -> impl Iterator<Item = (&Category, &CatalogItem)> {
        self.categories.iter().flat_map(|c| c.items.iter().map(move |i| (c, i)))
    }

    pub fn color(&self, name: &str) -> Option<[u8; 3]> {
        self.palette.get(name).and_then(|h| parse_hex(h))
    }
}
