use std::path::Path;
use std::process::{Command, Output};

const BASE: &str = r#"
seed = 4

[dataset.synth]
n_teams = 12
matches = 200
draw_margin = 0.5
seed = 9
"#;

const ALL_EMULATORS: &str = r#"
[[emulators]]
kind = "random"
[[emulators]]
kind = "winrate"
[[emulators]]
kind = "elo"
[[emulators]]
kind = "glicko2"
[[emulators]]
kind = "trueskill"
[[emulators]]
kind = "tsplayers"
"#;

const ALL_AFS: &str = r#"
[[afs]]
kind = "Random"
[[afs]]
kind = "MostSeen"
[[afs]]
kind = "LeastSeen"
[[afs]]
kind = "LikeliestWin"
[[afs]]
kind = "LikeliestDraw"
[[afs]]
kind = "CrossEntropy"
[[afs]]
kind = "Weighted"
[[afs]]
kind = "TSQuality"
"#;

fn skillbench(dir: &Path, config: &str, args: &[&str]) -> Output {
    let path = dir.join("run.toml");
    std::fs::write(&path, config).unwrap();
    Command::new(env!("CARGO_BIN_EXE_skillbench")).args(args).arg("--config").arg(&path).arg("--out").arg(dir.join("out")).output().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn full_table_has_undefined_cells() {
    let dir = tempfile::tempdir().unwrap();
    let sim = "[simulator]\ntrain_budget = 30\ncheckpoints = [10, 20, 30]\nruns = 2\n";
    let o = skillbench(dir.path(), &format!("{BASE}{ALL_EMULATORS}{ALL_AFS}{sim}"), &["table"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = std::fs::read_to_string(dir.path().join("out/table.csv")).unwrap();
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 6 * 8 * 3);
    let undefined: Vec<&&str> = rows.iter().filter(|r| r.contains("undefined")).collect();
    assert_eq!(undefined.len(), 12);
    assert!(undefined.iter().all(|r| r.split(',').nth(1) == Some("TSQuality")));

    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("out/manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["command"], "table");
    assert_eq!(manifest["seed"], 4);
    assert_eq!(manifest["config_sha256"].as_str().unwrap().len(), 64);
    assert_eq!(manifest["outputs"].as_array().unwrap().len(), 2);
}

#[test]
fn empty_emulator_list_fails_with_field_path() {
    let dir = tempfile::tempdir().unwrap();
    let o = skillbench(dir.path(), &format!("{BASE}{ALL_AFS}"), &["table"]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("emulators: at least one emulator"), "{}", stderr(&o));
}

#[test]
fn bad_parameters_name_the_entry() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = format!("{BASE}[[emulators]]\nkind = \"winrate\"\n[[emulators]]\nkind = \"trueskill\"\nbeta = -1.0\n{ALL_AFS}");
    let o = skillbench(dir.path(), &cfg, &["table"]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("emulators[1]:"), "{}", stderr(&o));
    let o = skillbench(dir.path(), "[dataset]\npath = \"x.csv\"\nseeed = 1\n", &["table"]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("seeed"), "{}", stderr(&o));
}

#[test]
fn sensitivity_flags_override_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = format!("{BASE}[sensitivity]\nbudget = 20\ndisplay_resolution = 5\n");
    let o = skillbench(dir.path(), &cfg, &["sensitivity", "--pairs", "sigma-beta", "--resolution", "3"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = dir.path().join("out");
    for v in ["TrueSkill", "TSPlayers"] {
        let raw = std::fs::read_to_string(out.join(format!("surface_{v}_sigma-beta_raw.csv"))).unwrap();
        assert_eq!(raw.lines().count(), 1 + 9);
        assert!(raw.starts_with("log10_sigma,log10_beta,sigma,beta,accuracy,default\n"));
        assert!(out.join(format!("surface_{v}_sigma-beta_smoothed.csv")).exists());
    }
    let summary = std::fs::read_to_string(out.join("sensitivity_summary.csv")).unwrap();
    assert_eq!(summary.lines().count(), 3);
    let o = skillbench(dir.path(), &cfg, &["sensitivity", "--pairs", "sigma-mu"]);
    assert!(!o.status.success());
}

#[test]
fn synth_and_validate_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let o = skillbench(dir.path(), "[synth]\nn_teams = 7\nmatches = 50\n", &["synth", "--seed", "3"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = dir.path().join("out");
    assert_eq!(std::fs::read_to_string(out.join("latent_skills.csv")).unwrap().lines().count(), 8);

    let matches = out.join("matches.csv");
    let check = Command::new(env!("CARGO_BIN_EXE_skillbench"))
        .args(["validate-dataset", matches.to_str().unwrap(), "--out"])
        .arg(dir.path().join("check"))
        .output()
        .unwrap();
    assert!(check.status.success(), "{}", stderr(&check));
    let summary = std::fs::read_to_string(dir.path().join("check/dataset_summary.csv")).unwrap();
    assert!(summary.lines().nth(1).unwrap().starts_with("50,7,35,"), "{summary}");

    let mut text = std::fs::read_to_string(&matches).unwrap();
    text.push_str("extra,team0000,team0001,a,b,c,d,e,f,g,h,i,j,sideways,0\n");
    std::fs::write(&matches, text).unwrap();
    let check = Command::new(env!("CARGO_BIN_EXE_skillbench"))
        .args(["validate-dataset", matches.to_str().unwrap(), "--out"])
        .arg(dir.path().join("check"))
        .output()
        .unwrap();
    assert!(!check.status.success());
    assert!(stderr(&check).contains("row 51: unknown outcome"), "{}", stderr(&check));
}
