//! Every case under `cases/` must reproduce its stored report exactly, up to
//! the timestamp. Set `NVORTEX_BLESS=1` to rewrite the stored reports.

use std::path::{Path, PathBuf};

use nvortex::{run_case, CaseConfig, Report};

fn cases_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../cases")
}

fn case_files() -> Vec<PathBuf> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(cases_dir())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    files
}

#[test]
fn reports_match_goldens() {
    let bless = std::env::var_os("NVORTEX_BLESS").is_some();
    let files = case_files();
    assert!(!files.is_empty());
    let mut mismatched = Vec::new();
    for path in &files {
        let cfg = CaseConfig::from_path(path).unwrap();
        let report = run_case(&cfg).unwrap();
        let golden_path = cases_dir().join("golden").join(path.file_name().unwrap());
        if bless {
            std::fs::write(&golden_path, report.to_json().unwrap()).unwrap();
            continue;
        }
        let text = std::fs::read_to_string(&golden_path).unwrap_or_else(|e| panic!("{}: {e}", golden_path.display()));
        let golden: Report = serde_json::from_str(&text).unwrap();
        if golden.canonical_json().unwrap() != report.canonical_json().unwrap() {
            mismatched.push(cfg.name.clone());
        }
    }
    assert!(mismatched.is_empty(), "reports differ from goldens: {mismatched:?}");
}

#[test]
fn runs_are_deterministic() {
    let path = cases_dir().join("dirac_taubes_n2_z2.json");
    let cfg = CaseConfig::from_path(&path).unwrap();
    let a = run_case(&cfg).unwrap().canonical_json().unwrap();
    let b = run_case(&cfg).unwrap().canonical_json().unwrap();
    assert_eq!(a, b);
}

#[test]
fn goldens_record_config_hashes() {
    for path in case_files() {
        let cfg = CaseConfig::from_path(&path).unwrap();
        let golden_path = cases_dir().join("golden").join(path.file_name().unwrap());
        let golden: Report = serde_json::from_str(&std::fs::read_to_string(golden_path).unwrap()).unwrap();
        assert_eq!(golden.provenance.config_hash, cfg.hash().unwrap(), "{}", cfg.name);
        assert_eq!(golden.case, cfg.name);
    }
}
