use std::path::Path;
use std::process::Command;

fn kidgym(args: &[&str]) -> String {
    let out = Command::new(env!("CARGO_BIN_EXE_kidgym")).args(args).output().unwrap();
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn gen_then_render() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("inst");
    kidgym(&["gen", "--task", "CL", "--level", "1", "--seed", "5", "--count", "3", "--out", path(&out)]);
    let files: Vec<_> = std::fs::read_dir(&out).unwrap().collect();
    assert_eq!(files.len(), 3);
    let first = out.join("CL-L1-0000.json");
    let inst = kidgym::TaskInstance::from_json(&std::fs::read_to_string(&first).unwrap()).unwrap();
    let suite = kidgym::harness::SuiteConfig { seed: 5, ..Default::default() };
    assert_eq!(inst, suite.instance(kidgym::TaskKind::Classification, kidgym::Level::L1, 0).unwrap());

    let png = dir.path().join("f.png");
    let line = kidgym(&["render", "--instance", path(&first), "--step", "2", "--px", "32", "--out", path(&png)]);
    assert!(line.starts_with("288x288 "), "{line}");
    let bytes = std::fs::read(&png).unwrap();
    assert_eq!(line.trim().split(' ').nth(1).unwrap(), kidgym::render::hex_sha256(&bytes));
    let again = kidgym(&["render", "--instance", path(&first), "--step", "2", "--px", "32", "--out", path(&png)]);
    assert_eq!(line, again);
    let bad = Command::new(env!("CARGO_BIN_EXE_kidgym"))
        .args(["render", "--instance", path(&first), "--step", "9", "--out", path(&png)])
        .output()
        .unwrap();
    assert!(!bad.status.success());
}

#[test]
fn eval_then_score() {
    let dir = tempfile::tempdir().unwrap();
    let suite = dir.path().join("suite.json");
    std::fs::write(&suite, r#"{"tasks":["SE","PL"],"levels":["L1","L2"],"rounds":4,"seed":3}"#).unwrap();
    let out = dir.path().join("run");
    let csv = kidgym(&["eval", "--suite", path(&suite), "--client", "oracle", "--mode", "cot", "--out", path(&out)]);
    assert!(csv.contains("SE,1,1,") && csv.contains("PL,1,1,"), "{csv}");
    assert_eq!(std::fs::read_dir(out.join("transcripts")).unwrap().count(), 16);
    let used: kidgym::harness::SuiteConfig =
        serde_json::from_str(&std::fs::read_to_string(out.join("suite.json")).unwrap()).unwrap();
    assert_eq!(used.episode.reasoning, kidgym::harness::Reasoning::Cot);

    // a full table of ones scores 100 everywhere
    let mut table = String::from("task,L1,L2,L3\n");
    for k in kidgym::TaskKind::ALL {
        table.push_str(&format!("{},1,1,1\n", k.code()));
    }
    let t = dir.path().join("t.csv");
    std::fs::write(&t, table).unwrap();
    let profile = dir.path().join("p.json");
    let printed = kidgym(&["score", "--table", path(&t), "--out", path(&profile)]);
    assert_eq!(printed.lines().count(), 5);
    assert!(printed.lines().all(|l| l.ends_with(" 100")), "{printed}");
    let radar: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&profile).unwrap()).unwrap();
    assert_eq!(radar["axes"].as_array().unwrap().len(), 5);

    let partial = dir.path().join("partial.json");
    std::fs::copy(out.join("table.json"), &partial).unwrap();
    let missing = Command::new(env!("CARGO_BIN_EXE_kidgym")).args(["score", "--table", path(&partial)]).output().unwrap();
    assert!(!missing.status.success(), "a partial table cannot be scored");
}

#[test]
fn baseline_reports_json() {
    let text = kidgym(&["baseline", "--task", "SE", "--level", "1", "--rounds", "200"]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["analytic"], 0.25);
    assert!((v["rate"].as_f64().unwrap() - 0.25).abs() < 0.1);
    assert!((v["exact_mean"].as_f64().unwrap() - 0.25).abs() < 1e-9);
    let text = kidgym(&["baseline", "--task", "DMA", "--level", "1", "--rounds", "50"]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert!(v["analytic"].is_null());
}
