use std::process::{Command, Output};

use grassmann::channels::{grassmann_channel, ChannelRep};

fn grassmann(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_grassmann")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn capacity_examples() {
    let cases: [(&[&str], &str); 4] = [
        (&["capacity", "quantum", "--d", "2", "--r", "0", "--base", "2"], "1.000000000000\n"),
        (&["capacity", "ratio", "--d", "2"], "0.693147180560\n"),
        (&["capacity", "quantum", "--d", "5", "--r", "0.7853981634", "--base", "d"], "0.000000000000\n"),
        (&["capacity", "quantum", "--d", "2", "--w", "1", "--base", "2"], "0.000000000000\n"),
    ];
    for (args, expected) in cases {
        let o = grassmann(args);
        assert_eq!(o.status.code(), Some(0), "{args:?}");
        assert_eq!(stdout(&o), expected, "{args:?}");
    }
}

#[test]
fn capacity_json_schema() {
    let o = grassmann(&["capacity", "quantum", "--d", "3", "--r", "0.4", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    assert_eq!(keys, ["base", "d", "r", "value"]);
    assert_eq!(v["base"], "d");
}

#[test]
fn exit_code_contract() {
    assert_eq!(grassmann(&["capacity", "quantum", "--d", "2", "--r", "1.6"]).status.code(), Some(1));
    assert_eq!(grassmann(&["capacity", "ratio", "--d", "1"]).status.code(), Some(1));
    assert_eq!(grassmann(&["capacity", "quantum", "--d", "two"]).status.code(), Some(2));
    assert_eq!(grassmann(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(grassmann(&["verify", "--suite", "nope", "--d", "2"]).status.code(), Some(2));
    assert_eq!(grassmann(&["capacity", "quantum", "--d", "2", "--r", "0", "--base", "10"]).status.code(), Some(2));
}

#[test]
fn sweep_is_deterministic_and_jobs_independent() {
    let dir = tempfile::tempdir().unwrap();
    let paths: Vec<_> = ["a.csv", "b.csv", "c.csv"].iter().map(|n| dir.path().join(n)).collect();
    for (path, jobs) in paths.iter().zip(["1", "1", "4"]) {
        let o = grassmann(&[
            "sweep",
            "--family",
            "grassmann-q",
            "--d",
            "2,5,10,50,100",
            "--points",
            "200",
            "--base",
            "2,d",
            "--jobs",
            jobs,
            "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0));
    }
    let bytes: Vec<Vec<u8>> = paths.iter().map(|p| std::fs::read(p).unwrap()).collect();
    assert_eq!(bytes[0], bytes[1]);
    assert_eq!(bytes[0], bytes[2]);
    let text = String::from_utf8(bytes[0].clone()).unwrap();
    assert_eq!(text.lines().next(), Some("family,d,param_name,param,base,value"));
    assert_eq!(text.lines().count(), 1 + 5 * 200 * 2);
}

#[test]
fn sweep_with_empty_domain_fails() {
    let o = grassmann(&["sweep", "--family", "unruh-q", "--d", "2", "--start", "1.0", "--stop", "2.0"]);
    assert_eq!(o.status.code(), Some(1));
    let o = grassmann(&["sweep", "--family", "grassmann-c", "--d", "2", "--points", "1"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn verify_degradable_beyond_boundary_passes_expected_failure() {
    let o = grassmann(&["verify", "--suite", "degradable", "--d", "2", "--r", "1.2"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["pass"], true);
    assert_eq!(v["reports"][0]["params"]["expected_degradable"], false);
    assert_eq!(v["reports"][0]["params"]["map_found"], false);
}

#[test]
fn verify_all_at_reference_point() {
    let o = grassmann(&["verify", "--suite", "all", "--d", "3", "--r", "0.5", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let again = grassmann(&["verify", "--suite", "all", "--d", "3", "--r", "0.5", "--seed", "7"]);
    assert_eq!(o.stdout, again.stdout);
}

#[test]
fn dump_channel_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g2.json");
    let o = grassmann(&["dump-channel", "--d", "2", "--r", "0.4", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let loaded = ChannelRep::read_json(&path).unwrap();
    assert_eq!(loaded.out_dim(), 3);
    let nonzero: usize = loaded.kraus().iter().map(|k| k.iter().filter(|z| z.norm() > 0.0).count()).sum();
    assert_eq!(nonzero, 4);
    let fresh = grassmann_channel(2, 0.4).unwrap();
    assert!((loaded.choi() - fresh.choi()).norm() < 1e-12);

    let trivial = dir.path().join("g1.json");
    grassmann(&["dump-channel", "--d", "1", "--r", "0.3", "--out", trivial.to_str().unwrap()]);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&trivial).unwrap()).unwrap();
    assert_eq!(v["blocks"], serde_json::json!([{"k": 1, "weight": 1.0, "dim": 1}]));
}

#[test]
fn dump_channel_to_bad_path_fails() {
    let o = grassmann(&["dump-channel", "--d", "2", "--r", "0.4", "--out", "/nonexistent/dir/g.json"]);
    assert_eq!(o.status.code(), Some(1));
}
