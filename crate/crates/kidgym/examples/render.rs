//! Render every state along the optimal plan of a memory task to PNG.
//!
//! cargo run -p kidgym --example render -- /tmp/frames

use kidgym::procgen::sample_instance;
use kidgym::render::{render_frame, RenderConfig};
use kidgym::world::apply_action;
use kidgym::{Level, TaskKind};

fn main() -> anyhow::Result<()> {
    let out = std::env::args().nth(1).map(Into::into).unwrap_or_else(|| std::env::temp_dir().join("kidgym-frames"));
    std::fs::create_dir_all(&out)?;
    let inst = sample_instance(TaskKind::MemoryDecode, Level::L2, 3)?;
    let mut state = inst.initial.clone();
    for step in 0..=inst.witness.len() {
        for px in [32, 64, 96] {
            let frame = render_frame(&state, &RenderConfig::with_cell_px(px))?;
            let path = out.join(format!("step{step}-{px}px.png"));
            std::fs::write(&path, frame.png()?)?;
            println!("{} {}x{} {}", path.display(), frame.width, frame.height, &frame.hash()[..12]);
        }
        if let Some(a) = inst.witness.get(step) {
            state = apply_action(&state, a)?;
        }
    }
    Ok(())
}
