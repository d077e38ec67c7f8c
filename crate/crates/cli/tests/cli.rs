use std::path::PathBuf;
use std::process::{Command, Output};

fn gaussqec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gaussqec")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("gaussqec-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn count_dynamical_doubled() {
    let o = gaussqec(&["count", "--dim", "1", "--matter", "dynamical", "--variant", "doubled", "--n", "3"]);
    assert!(o.status.success());
    let line = stdout(&o).lines().find(|l| l.starts_with("1d/dynamical/doubled")).unwrap().to_string();
    let cols: Vec<&str> = line.split_whitespace().collect();
    assert_eq!(cols[2], "45");
    assert_eq!(cols[4], "60");
}

#[test]
fn count_writes_json_records() {
    let dir = scratch("count");
    let out = dir.join("count.jsonl");
    let o = gaussqec(&["count", "--all", "--dim", "2", "--nx", "2", "--ny", "3", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&out).unwrap();
    let data: Vec<u64> = text
        .lines()
        .map(|l| serde_json::from_str::<serde_json::Value>(l).unwrap()["data"].as_u64().unwrap())
        .collect();
    assert_eq!(data, vec![216, 288]);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn verify_pure_compressed_passes() {
    let o = gaussqec(&["verify", "--dim", "1", "--matter", "pure", "--variant", "compressed", "--n", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn verify_reports_degenerate_chain() {
    let o = gaussqec(&["verify", "--dim", "1", "--matter", "pure", "--variant", "compressed", "--n", "1"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn sample_at_zero_rate() {
    let o = gaussqec(&["sample", "--dim", "1", "--matter", "dynamical", "--n", "1", "--p", "0", "--shots", "500"]);
    assert!(o.status.success());
    let row = stdout(&o).lines().find(|l| l.trim_start().starts_with("0.00e0")).unwrap().to_string();
    assert_eq!(row.split_whitespace().nth(2), Some("0"));
}

#[test]
fn config_file_with_flag_override() {
    let dir = scratch("config");
    let cfg = dir.join("run.toml");
    std::fs::write(&cfg, "dim = 1\nmatter = \"pure\"\nvariant = \"doubled\"\nn = 1\n[count]\nn = 2\n").unwrap();
    let o = gaussqec(&["count", "--config", cfg.to_str().unwrap()]);
    assert!(stdout(&o).contains(" 18 "), "{}", stdout(&o));
    let o = gaussqec(&["count", "--config", cfg.to_str().unwrap(), "--n", "4"]);
    assert!(stdout(&o).contains(" 36 "), "{}", stdout(&o));
    std::fs::write(&cfg, "dimension = 1\n").unwrap();
    assert_eq!(gaussqec(&["count", "--config", cfg.to_str().unwrap()]).status.code(), Some(3));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn categorized_exit_codes() {
    assert_eq!(gaussqec(&["count", "--dim", "3", "--matter", "pure", "--n", "1"]).status.code(), Some(3));
    assert_eq!(gaussqec(&["count", "--dim", "2", "--matter", "nondynamical", "--nx", "1", "--ny", "1"]).status.code(), Some(3));
    assert_eq!(gaussqec(&["count", "--matter", "plasma"]).status.code(), Some(2));
    let o = gaussqec(&["verify", "--dim", "2", "--matter", "pure", "--nx", "1", "--ny", "1", "--engine", "dense"]);
    assert_eq!(o.status.code(), Some(5));
}

#[test]
fn emit_to_file_is_parseable() {
    let dir = scratch("emit");
    let out = dir.join("cycle.txt");
    let o = gaussqec(&["emit", "--dim", "1", "--matter", "pure", "--n", "1", "--round", "cycle", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.contains("# pure-gauge round k=0"));
    let c = gaussqec::circuit::parse_text(&text).unwrap();
    assert_eq!(c.n, 12);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn tables_diff_matches_artifact() {
    let dir = scratch("tables");
    let out = dir.join("diff.txt");
    let o = gaussqec(&["tables", "--diff-out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let artifact = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../artifacts/table_diffs.txt");
    assert_eq!(std::fs::read_to_string(out).unwrap(), std::fs::read_to_string(artifact).unwrap());
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn crosscheck_and_workers() {
    let o = gaussqec(&["crosscheck", "--circuits", "20", "--seed", "3", "--workers", "2"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("20/20"));
}

#[test]
fn example_config_loads() {
    let cfg = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs/example.toml");
    let o = gaussqec(&["count", "--config", cfg.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("1d/dynamical/doubled"));
}
