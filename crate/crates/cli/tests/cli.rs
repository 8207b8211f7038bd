use std::process::{Command, Output};

use serde_json::Value;

fn cobord(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cobord")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = cobord(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("JSON output")
}

fn partitions(n: usize) -> usize {
    let mut p = vec![0usize; n + 1];
    p[0] = 1;
    for part in 1..=n {
        for k in part..=n {
            p[k] += p[k - part];
        }
    }
    p[n]
}

#[test]
fn formal_inverse_of_the_multiplicative_law() {
    let v = json(&["fgl", "chi", "--law", "multiplicative", "--order", "5"]);
    assert_eq!(v["display"], "-u - beta*u^2 - beta^2*u^3 - beta^3*u^4 - beta^4*u^5 + O(6)");
    // chi(u) = -u/(1 - beta u): every coefficient is -beta^(k-1)
    let terms = v["series"]["terms"].as_array().unwrap();
    assert_eq!(terms.len(), 5);
    for t in terms {
        let k = t["exps"][0].as_u64().unwrap();
        let coeff = &t["coeff"]["terms"][0];
        assert_eq!(coeff["coeff"], "-1");
        let beta = coeff["exps"].get("beta").and_then(Value::as_u64).unwrap_or(0);
        assert_eq!(beta, k - 1);
    }
}

#[test]
fn lazard_ranks_table() {
    let v = json(&["lazard", "ranks", "--max-degree", "3"]);
    let ranks: Vec<u64> = v["ranks"].as_array().unwrap().iter().map(|r| r["quotient_rank"].as_u64().unwrap()).collect();
    let want: Vec<u64> = (1..=3).map(|n| partitions(n) as u64).collect();
    assert_eq!(ranks, want);
    assert_eq!(ranks, vec![1, 2, 3]);
    let text = cobord(&["lazard", "ranks", "--max-degree", "3", "--format", "text"]);
    assert!(String::from_utf8_lossy(&text.stdout).contains("quotient rank"));
}

#[test]
fn additive_hypersurface() {
    let v = json(&["model", "hypersurface", "--n", "2", "--d", "2", "--law", "additive"]);
    assert_eq!(v, serde_json::json!({ "h1": "2" }));
}

#[test]
fn todd_genus_of_projective_spaces() {
    for n in ["1", "4", "8"] {
        let v = json(&["model", "genus", "--n", n, "--law", "multiplicative:1", "--ring", "Q"]);
        assert_eq!(v["genus"], "1");
    }
}

#[test]
fn specialization_matches_the_target_law() {
    let v = json(&["model", "specialize", "--n", "3", "--d", "2", "--to", "multiplicative"]);
    assert_eq!(v["matches_direct"], true);
    assert_eq!(v["specialized"], serde_json::json!({ "h1": "2", "h2": "-beta" }));
}

#[test]
fn divisor_class_and_push_forward() {
    let dir = std::env::temp_dir().join(format!("cobord-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("div.json");
    std::fs::write(
        &path,
        r#"{"ambient":{"type":"Pn","n":2},"components":[{"bundle":"O(1)","mult":1},{"bundle":"O(1)","mult":1}],"faces":"generic"}"#,
    )
    .unwrap();
    let v = json(&["snc", "class", "--input", path.to_str().unwrap(), "--push"]);
    assert_eq!(v["pushforward"], serde_json::json!({ "h1": "2", "h2": "-beta" }));
    assert_eq!(v["faces"].as_array().unwrap().len(), 3);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn series_round_trip_through_validate() {
    let dir = std::env::temp_dir().join(format!("cobord-cli-rt-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let shown = json(&["fgl", "show", "--law", "universal:4"]);
    let path = dir.join("series.json");
    std::fs::write(&path, serde_json::to_string(&shown["series"]).unwrap()).unwrap();
    let v = json(&["fgl", "validate", "--input", path.to_str().unwrap(), "--law", "universal:4"]);
    assert_eq!(v["passed"], true);
    // without the relations the same coefficients are not associative
    let v = json(&["fgl", "validate", "--input", path.to_str().unwrap()]);
    assert_eq!(v["passed"], false);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn identical_runs_give_identical_output() {
    let args = ["snc", "decompose", "--ns", "1,2,1", "--law", "universal:4"];
    assert_eq!(cobord(&args).stdout, cobord(&args).stdout);
}

#[test]
fn domain_errors_exit_with_one() {
    let out = cobord(&["fgl", "log", "--law", "multiplicative"]);
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["error"]["kind"], "not_rational");

    let dir = std::env::temp_dir().join(format!("cobord-cli-bad-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.json");
    std::fs::write(&path, "{not json").unwrap();
    let out = cobord(&["snc", "class", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["error"]["kind"], "input");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(cobord(&["fgl", "nosuch"]).status.code(), Some(2));
    assert_eq!(cobord(&[]).status.code(), Some(2));
    assert_eq!(cobord(&["model", "c1"]).status.code(), Some(2));
}
