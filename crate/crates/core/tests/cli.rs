use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use quflux::cli::{self, read_csv};
use quflux::evolution::run;

fn quflux(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quflux")).args(args).output().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

const MODEL1: &str = "[model]\npreset = \"model1\"\n[run]\ninitial = \"10\"\n";

#[test]
fn simulate_writes_csv_that_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = write(dir.path(), "h2.toml", "[model]\npreset = \"model3-h2\"\nparams = { lambda = 1, mu = 3 }\n[run]\ninitial = \"001\"\nsteps = 51\nt_max = 5\n");
    let out = dir.path().join("h2.csv");
    let o = quflux(&["simulate", "--config", &cfg_path, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));

    let (header, rows) = read_csv(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(header, ["t", "n_1", "n_2", "n_3", "norm"]);
    assert_eq!(rows.len(), 51);
    let ts = run(&cli::load_config(Path::new(&cfg_path)).unwrap().request().unwrap()).unwrap();
    for (i, row) in rows.iter().enumerate() {
        assert!((row[0] - ts.times[i]).abs() <= 1e-11 * ts.times[i].max(1.0));
        for j in 0..3 {
            assert!((row[j + 1] - ts.values[j][i]).abs() <= 1e-11);
        }
        assert!((row[4] - ts.norms[i]).abs() <= 1e-11 * ts.norms[i]);
    }
}

#[test]
fn simulate_is_deterministic_and_defaults_to_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "cycle.toml", "[model]\npreset = \"cycle-1-2-30\"\n");
    let a = quflux(&["simulate", "--config", &cfg]);
    let b = quflux(&["simulate", "--config", &cfg]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert_eq!(text.lines().count(), 402);
    assert!(text.starts_with("t,n_1,n_2,n_3,norm\n0,1,0,1,1\n"));
    assert!(text.lines().last().unwrap().starts_with("10,"));
}

#[test]
fn output_path_from_config() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("m1.csv");
    let cfg = write(dir.path(), "m1.toml", &format!("{MODEL1}steps = 3\n[output]\ncsv = {:?}\n", csv.to_str().unwrap()));
    let o = quflux(&["simulate", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert_eq!(fs::read_to_string(csv).unwrap(), "t,n_1,n_2,norm\n0,1,0,1\n5,0.0384615384615,0.961538461538,5.09901951359\n10,0.00990099009901,0.990099009901,10.0498756211\n");
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.toml", "[model]\npreset = \"model1\"\n[run]\ninitial = \"20\"\n");
    let o = quflux(&["simulate", "--config", &bad]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("run.initial"));

    let unknown = write(dir.path(), "unknown.toml", "[model]\npreset = \"model1\"\nflavour = 2\n");
    let o = quflux(&["compare", "--config", &unknown]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("flavour"));

    let missing = dir.path().join("missing.toml");
    assert_eq!(quflux(&["simulate", "--config", missing.to_str().unwrap()]).status.code(), Some(3));

    let good = write(dir.path(), "m1.toml", MODEL1);
    let unwritable = dir.path().join("no/such/dir/out.csv");
    let o = quflux(&["simulate", "--config", &good, "--out", unwritable.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn compare_reports_strategy_failures() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "m1.toml", MODEL1);
    let o = quflux(&["compare", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(0));
    let report = String::from_utf8(o.stdout).unwrap();
    assert!(report.contains("strategy=unnormalized; finding=unbounded; observable=n_2"), "{report}");
    assert!(report.contains("strategy=heisenberg; finding=frozen"), "{report}");
    assert!(report.contains("strategy=normalized; finding=clean"), "{report}");
    assert!(report.contains("self_adjoint=false"));
}

#[test]
fn compare_finds_the_cascade_peak() {
    let cfg = cli::parse_config("[model]\npreset = \"model3-h2\"\nparams = { lambda = 2, mu = 1 }\n[run]\ninitial = \"001\"\n").unwrap();
    let report = cli::compare(&cfg).unwrap();
    let peak = report.peak("n_2").unwrap();
    assert!((peak.value - 1.0 / 3.0).abs() < 1e-9, "{peak:?}");
    assert!((peak.time - 1.0).abs() < 1e-4, "{peak:?}");
    assert!(report.render().contains("observable=n_2; peak=0.333333333333"));
}

#[test]
fn strategies_agree_once_hermitized() {
    let cfg = cli::parse_config("[model]\npreset = \"info-hb\"\n[run]\ninitial = \"110\"\nt_max = 3\nsteps = 31\n").unwrap();
    let report = cli::compare(&cfg.hermitized()).unwrap();
    assert!(report.self_adjoint);
    assert!(report.max_pairwise_deviation() < 1e-10);
    assert!(report.strategies.iter().all(|d| d.is_clean()));
    assert!(report.render().contains("check=self_adjoint_agreement; status=ok"));

    let raw = cli::compare(&cfg).unwrap();
    assert!(!raw.self_adjoint);
    assert!(raw.strategy(quflux::Strategy::Normalized).is_clean());
}

#[test]
fn verify_exit_codes() {
    let o = quflux(&["verify"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("57 pairs; 0 failed"), "{text}");

    let o = quflux(&["verify", "--inject-fault"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8(o.stdout).unwrap().contains("status=FAIL"));

    let o = quflux(&["verify", "--filter", "model2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8(o.stdout).unwrap().contains("7 pairs"));

    let o = quflux(&["verify", "--filter", "no-such-model"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8(o.stdout).unwrap().contains("0 pairs"));
}
