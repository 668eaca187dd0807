use std::path::PathBuf;

use proptest::prelude::*;
use serde_json::Value;

use steinx::run;
use steinx::wire::{handlebody_json, parse_handlebody};
use steinx_core::intlinalg::IntegerMatrix;
use steinx_core::stein::{SteinHandlebody, TwoHandle};
use steinx_core::BigInt;

struct Out {
    code: i32,
    stdout: String,
    stderr: String,
}

impl Out {
    fn json(&self) -> Value {
        serde_json::from_str(&self.stdout).unwrap_or_else(|e| panic!("{e}: {}", self.stdout))
    }
}

fn steinx(args: &[&str], stdin: &str) -> Out {
    let mut argv = vec!["steinx"];
    argv.extend_from_slice(args);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(argv, &mut stdin.as_bytes(), &mut out, &mut err);
    Out {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn temp(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("steinx-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, contents).unwrap();
    p
}

#[test]
fn gen_znp_pipes_into_invariants() {
    let g = steinx(&["gen", "znp", "--n", "3", "--p", "4"], "");
    assert_eq!(g.code, 0, "{}", g.stderr);
    assert!(g.json()["note"].is_string());
    let r = steinx(&["invariants", "-"], &g.stdout);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v = r.json();
    assert_eq!(v["c1"]["divisibility"], 4);
    assert_eq!(v["contact_class"]["r"], 4);
    assert_eq!(v["b2"], 3);
    assert_eq!(v["contact_class"]["diffeo_type"], "trivial_bundle_sum");
    assert!(v["provenance"]["divisibility"].is_string());
}

#[test]
fn detect_on_znp_family() {
    let fam = steinx(&["gen", "family", "--n", "3", "--len", "13"], "").stdout;
    for route in ["divisibility", "contact"] {
        let r = steinx(&["detect", "-", "--route", route], &fam);
        assert_eq!(r.code, 0, "{route}: {}", r.stderr);
        let v = r.json();
        assert_eq!(v["verdict"], "infinite_exotic_subfamily");
        let lowers: Vec<i64> = v["witness_lower_bounds"]
            .as_array()
            .unwrap()
            .iter()
            .map(|x| x.as_i64().unwrap())
            .collect();
        assert!(lowers.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(v["asymptotic"]["lower_bound_unbounded"], true);
    }
}

#[test]
fn detect_equal_members_is_inconclusive() {
    let fam = r#"{"members":[
        {"id":"a","handlebody":{"handles":[{"tb":-1,"rot":0}]}},
        {"id":"b","handlebody":{"handles":[{"tb":-1,"rot":0}]}}]}"#;
    let r = steinx(&["detect", "-"], fam);
    assert_eq!(r.code, 1);
    assert_eq!(r.json()["verdict"], "inconclusive");
}

#[test]
fn classify_irreducible_one_handle_at_depth_zero() {
    let r = steinx(&["classify", "-", "--depth", "0"], r#"{"one_handles":1,"handles":[]}"#);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("unclassifiable within budget"));
    assert_eq!(r.json()["status"], "unclassifiable within budget");
}

#[test]
fn classify_cancelling_pair() {
    let x = r#"{"one_handles":1,"handles":[{"tb":1,"rot":0,"word":[1]},{"tb":-1,"rot":0}],"linking":[[0,0],[0,-2]]}"#;
    let r = steinx(&["classify", "-", "--depth", "2"], x);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v = r.json();
    assert_eq!(v["ac_reduced"], true);
    assert_eq!((v["n"].as_i64(), v["r"].as_i64()), (Some(1), Some(0)));
}

#[test]
fn malformed_input_points_at_field() {
    let r = steinx(&["invariants", "-"], r#"{"handles":[{"tb":-1,"rot":0},{"tb":"x","rot":1}]}"#);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("handles[1].tb"), "{}", r.stderr);
    let r = steinx(&["invariants", "-"], r#"{"handles":[{"tb":-1,"rot":0}],"bogus":1}"#);
    assert_eq!(r.code, 2);
    let r = steinx(&["invariants", "-"], r#"{"handles":[{"tb":-1,"rot":1}]}"#);
    assert_eq!(r.code, 2, "tb + rot must be odd");
    let r = steinx(&["invariants", "/nonexistent/x.json"], "");
    assert_eq!(r.code, 2);
    let r = steinx(&["frobnicate"], "");
    assert_eq!(r.code, 2);
}

#[test]
fn acreduce_exit_codes() {
    let r = steinx(&["acreduce", "-"], r#"{"generators":2,"relators":[[1,2],[2]]}"#);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v = r.json();
    assert_eq!(v["status"], "trivialized");
    assert_eq!(v["trace"]["end"]["generators"], 0);
    let r = steinx(&["acreduce", "-", "--depth", "3", "--max-states", "500"], r#"{"generators":1,"relators":[[1,1]]}"#);
    assert_eq!(r.code, 1);
    assert_eq!(r.json()["obstruction"], "abelianization ℤ/2");
}

#[test]
fn compare_with_certificate() {
    let a = temp("a.json", &steinx(&["gen", "znp", "--n", "3", "--p", "0"], "").stdout);
    let b = temp("b.json", &steinx(&["gen", "znp", "--n", "3", "--p", "8"], "").stdout);
    let o = temp(
        "oracle.json",
        r#"{"entries":[{"class":[1,0,0],"genus_ub":1},{"class":[0,1,0],"genus_ub":1},{"class":["0","0","1"],"genus_ub":0}]}"#,
    );
    let (a, b, o) = (a.to_str().unwrap(), b.to_str().unwrap(), o.to_str().unwrap());
    let r = steinx(&["compare", a, b, "--oracle", o], "");
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v = r.json();
    assert_eq!(v["contactomorphic"], false);
    assert_eq!(v["diffeomorphic_total_spaces"], true);
    assert_eq!(v["evidence"]["b2_equal"], true);
    assert_eq!(v["certificate"]["status"], "certified");
    assert_eq!(v["certificate"]["upper_a"], 1);
    assert_eq!(v["certificate"]["lower_b"], 4);
    let r = steinx(&["compare", a, a, "--oracle", o], "");
    assert_eq!(r.json()["certificate"]["status"], "none");
}

#[test]
fn enumerate_unknot_with_sphere_oracle() {
    let x = temp("unknot.json", r#"{"handles":[{"tb":-1,"rot":0}]}"#);
    let o = temp("sphere.json", r#"{"entries":[{"class":[1],"genus_ub":0}]}"#);
    let r = steinx(
        &["enumerate-c1", x.to_str().unwrap(), "--oracle", o.to_str().unwrap()],
        "",
    );
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v = r.json();
    assert_eq!(v["count"], 1);
    assert_eq!(v["contains_own_class"], true);
}

#[test]
fn genus_report_fields() {
    let g = steinx(&["gen", "znp", "--n", "2", "--p", "6"], "").stdout;
    let r = steinx(&["genus", "-", "--explain"], &g);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v = r.json();
    assert_eq!(v["lower"], 4);
    assert!(v["upper"].is_null());
    assert!(v["checks_run"].as_array().unwrap().len() >= 3);
    assert!(v["inequality"].is_string());
}

#[test]
fn gen_torus_family() {
    let r = steinx(&["gen", "torus", "--rs", "1,3", "--k", "2"], "");
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v = r.json();
    assert_eq!(v["members"].as_array().unwrap().len(), 2);
    let d = steinx(&["detect", "-", "--route", "contact"], &r.stdout).json();
    let rs: Vec<_> = d["members"]
        .as_array()
        .unwrap()
        .iter()
        .map(|m| m["contact_class"]["r"].as_i64().unwrap())
        .collect();
    assert_eq!(rs, vec![1, 3]);
    assert_eq!(steinx(&["gen", "torus", "--rs", "1,2"], "").code, 2);
}

fn lookup<'a>(v: &'a Value, path: &str) -> &'a Value {
    let mut cur = v;
    for part in path.split('.') {
        let (key, idx) = match part.find('[') {
            Some(i) => (&part[..i], Some(&part[i..])),
            None => (part, None),
        };
        if !key.is_empty() {
            cur = &cur[key];
        }
        if let Some(idx) = idx {
            for i in idx.split(['[', ']']).filter(|s| !s.is_empty()) {
                cur = &cur[i.parse::<usize>().unwrap()];
            }
        }
    }
    cur
}

fn leaves(v: &Value) -> usize {
    match v {
        Value::Object(o) if !o.is_empty() => o.values().map(leaves).sum(),
        Value::Array(a) if a.iter().any(Value::is_object) => a.iter().map(leaves).sum(),
        _ => 1,
    }
}

#[test]
fn table_and_json_agree() {
    let fam = steinx(&["gen", "family", "--len", "6"], "").stdout;
    let z = steinx(&["gen", "znp", "--n", "4", "--p", "3"], "").stdout;
    let cases = [
        (vec!["invariants", "-"], z.clone()),
        (vec!["classify", "-"], z),
        (vec!["detect", "-", "--explain"], fam),
    ];
    for (args, input) in cases {
        let j = steinx(&args, &input).json();
        let mut targs = args.clone();
        targs.extend(["--format", "table"]);
        let t = steinx(&targs, &input).stdout;
        assert_eq!(t.lines().count(), leaves(&j), "{args:?}");
        for line in t.lines() {
            let (path, value) = line.split_once("  ").unwrap();
            let value = value.trim_start();
            let expected = lookup(&j, path);
            let rendered = match expected {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            assert_eq!(value, rendered, "{args:?} {path}");
        }
    }
}

#[test]
fn generated_records_round_trip_byte_identical() {
    for args in [
        vec!["gen", "xp", "--p", "5"],
        vec!["gen", "y", "--k", "3"],
        vec!["gen", "znp", "--n", "5", "--p", "12"],
    ] {
        let g = steinx(&args, "").stdout;
        let x = parse_handlebody(&g).unwrap();
        let again = serde_json::to_string_pretty(&handlebody_json(&x, Some(steinx::wire::model_note()))).unwrap() + "\n";
        assert_eq!(again, g);
        let r1 = steinx(&["invariants", "-"], &g).stdout;
        let r2 = steinx(&["invariants", "-"], &again).stdout;
        assert_eq!(r1, r2);
    }
}

fn record() -> impl Strategy<Value = SteinHandlebody> {
    (1usize..=3).prop_flat_map(|n| {
        (
            proptest::collection::vec((-3i64..=2, -2i64..=2), n),
            proptest::collection::vec(-3i64..=3, n * n),
        )
            .prop_map(move |(hs, l)| {
                let handles = hs
                    .into_iter()
                    .map(|(tb, k)| TwoHandle::new(tb, 2 * k + (tb + 1).rem_euclid(2)))
                    .collect();
                let mut m = IntegerMatrix::zeros(n, n);
                for i in 0..n {
                    for j in i + 1..n {
                        m[(i, j)] = BigInt::from(l[i * n + j]);
                        m[(j, i)] = BigInt::from(l[i * n + j]);
                    }
                }
                SteinHandlebody::with_derived_framings(0, handles, m)
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn invariant_reports_survive_round_trip(x in record()) {
        let text = serde_json::to_string(&handlebody_json(&x, None)).unwrap();
        let parsed = parse_handlebody(&text).unwrap();
        prop_assert_eq!(&parsed, &x);
        let r1 = steinx(&["invariants", "-"], &text);
        prop_assert_eq!(r1.code, 0);
        let text2 = serde_json::to_string(&handlebody_json(&parsed, None)).unwrap();
        prop_assert_eq!(&text2, &text);
        prop_assert_eq!(r1.stdout, steinx(&["invariants", "-"], &text2).stdout);
    }
}
