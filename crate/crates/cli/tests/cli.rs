use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn normred(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_normred"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// `  <id>  <value>` line of the table.
fn table_value(table: &str, id: &str) -> Option<String> {
    table.lines().find_map(|l| {
        let rest = l.strip_prefix("  ")?.strip_prefix(id)?;
        rest.starts_with("  ").then(|| rest.trim().to_string())
    })
}

/// `(n, L_n, q_n)` rows of the first sequence table.
fn table_sequence(table: &str) -> Vec<(u64, Option<u64>, u64)> {
    table
        .lines()
        .skip_while(|l| !l.trim_start().starts_with("n    L_n"))
        .skip(1)
        .map_while(|l| {
            let cols: Vec<&str> = l.split_whitespace().collect();
            let [n, ln, qn] = cols[..] else { return None };
            Some((n.parse().ok()?, ln.parse().ok(), qn.parse().ok()?))
        })
        .collect()
}

#[test]
fn hypersurface_degree_four() {
    let o = normred(&["hypersurface", "--d", "4"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let t = stdout(&o);
    assert!(t.contains("  pg=4 nr=3 br=3 q_inf=0\n"), "{t}");
    let q: Vec<u64> = table_sequence(&t).iter().map(|r| r.2).collect();
    assert_eq!(&q[..3], &[4, 1, 0]);
    assert_eq!(table_value(&t, "colength R/Q").as_deref(), Some("4"));
}

#[test]
fn veronese_genus_two() {
    let o = normred(&["veronese", "--g", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let t = stdout(&o);
    assert!(t.contains("  pg=2 nr=1 br=3 q_inf=0\n"), "{t}");
    assert_eq!(table_value(&t, "colength R/Q").as_deref(), Some("6"));
    assert_eq!(table_value(&t, "closure certificate degree u").as_deref(), Some("2"));
    assert_eq!(table_value(&t, "reduction Q").as_deref(), Some("(y^2 - z^4, y*z)"));
}

#[test]
fn json_and_csv_match_the_table() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("r.json");
    let csv = dir.path().join("r.csv");
    let o = normred(&[
        "blowup-family",
        "--d",
        "3,4",
        "--r",
        "1",
        "--field",
        "fp:32003",
        "--seed",
        "11",
        "--json",
        path_str(&json),
        "--csv",
        path_str(&csv),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let table = stdout(&o);
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(report["inputs"]["seed"], 11);
    assert_eq!(report["inputs"]["field"], "fp:32003");

    let sections = report["sections"].as_array().unwrap();
    assert_eq!(sections.len(), 2);
    let blocks: Vec<&str> = table.split("\nblowup ").skip(1).collect();
    assert_eq!(blocks.len(), 2);
    for (s, block) in sections.iter().zip(&blocks) {
        assert!(block.starts_with(s["params"].as_str().unwrap()));
        for e in s["values"].as_array().unwrap() {
            let shown = match &e["value"] {
                Value::String(v) => v.clone(),
                v => v.to_string(),
            };
            assert_eq!(table_value(block, e["id"].as_str().unwrap()), Some(shown));
        }
        let seq = &s["sequence"];
        let rows: Vec<(u64, Option<u64>, u64)> = seq["rows"]
            .as_array()
            .unwrap()
            .iter()
            .map(|r| (r["n"].as_u64().unwrap(), r["l_n"].as_u64(), r["q_n"].as_u64().unwrap()))
            .collect();
        assert_eq!(table_sequence(block), rows);
    }

    let mut reader = csv::Reader::from_path(&csv).unwrap();
    let headers = reader.headers().unwrap().clone();
    assert_eq!(
        headers.iter().take(10).collect::<Vec<_>>(),
        ["family", "params", "n", "L_n", "q_n", "nr", "br", "pg", "q_inf", "checks_passed"]
    );
    let records: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    let mut i = 0;
    for s in sections {
        let seq = &s["sequence"];
        for row in seq["rows"].as_array().unwrap() {
            let rec = &records[i];
            i += 1;
            assert_eq!(&rec[1], s["params"].as_str().unwrap());
            assert_eq!(rec[2].parse::<u64>().unwrap(), row["n"].as_u64().unwrap());
            assert_eq!(rec[3].parse::<u64>().ok(), row["l_n"].as_u64());
            assert_eq!(rec[4].parse::<u64>().unwrap(), row["q_n"].as_u64().unwrap());
            assert_eq!(rec[5].parse::<u64>().unwrap(), seq["nr"].as_u64().unwrap());
            assert_eq!(rec[6].parse::<u64>().unwrap(), seq["br"].as_u64().unwrap());
            assert_eq!(rec[7].parse::<u64>().unwrap(), seq["pg"].as_u64().unwrap());
            assert_eq!(rec[8].parse::<u64>().unwrap(), seq["q_inf"].as_u64().unwrap());
            assert_eq!(&rec[9], "true");
            assert_eq!(&rec[11], "11");
        }
    }
    assert_eq!(i, records.len());
}

#[test]
fn same_seed_gives_identical_reports() {
    let dir = tempfile::tempdir().unwrap();
    let run = |tag: &str, mode: Option<&str>| {
        let json = dir.path().join(format!("{tag}.json"));
        let csv = dir.path().join(format!("{tag}.csv"));
        let mut args = vec!["blowup-family", "--d", "4", "--r", "1,2", "--seed", "5"];
        args.extend(mode);
        args.extend(["--json", path_str(&json), "--csv", path_str(&csv)]);
        let o = normred(&args);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        (o.stdout, std::fs::read(json).unwrap(), std::fs::read(csv).unwrap())
    };
    let a = run("a", None);
    let b = run("b", None);
    let c = run("c", Some("--sequential"));
    assert_eq!(a, b);
    assert_eq!(a, c);
}

#[test]
fn config_file_supplies_defaults_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"d": [3], "seed": 9, "field": "fp:32003"}"#).unwrap();
    let o = normred(&["hypersurface", "--config", path_str(&cfg)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let t = stdout(&o);
    assert!(t.starts_with("hypersurface [d=3 field=fp:32003 nmax=default seed=9 "), "{t}");

    let o = normred(&["hypersurface", "--config", path_str(&cfg), "--d", "4", "--seed", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("hypersurface [d=4 field=fp:32003 nmax=default seed=2 "));

    std::fs::write(&cfg, r#"{"depth": 3}"#).unwrap();
    assert_eq!(normred(&["hypersurface", "--config", path_str(&cfg)]).status.code(), Some(2));
}

#[test]
fn usage_errors_exit_with_two() {
    let o = normred(&["veronese", "--g", "3", "--field", "fp:2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("characteristic 2"), "{}", stderr(&o));
    // 7 does not divide 2g + 2 = 8, so this one is fine
    assert_eq!(normred(&["veronese", "--g", "3", "--field", "fp:7"]).status.code(), Some(0));
    assert_eq!(normred(&["veronese", "--g", "2", "--field", "fp:3"]).status.code(), Some(2));
    assert_eq!(normred(&["hypersurface"]).status.code(), Some(2));
    assert_eq!(normred(&["hypersurface", "--d", "2"]).status.code(), Some(2));
    assert_eq!(normred(&["hypersurface", "--d", "x"]).status.code(), Some(2));
    assert_eq!(normred(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(normred(&["accept", "--criterion", "8"]).status.code(), Some(2));
}

#[test]
fn bad_graph_files_are_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("g.json");
    std::fs::write(
        &f,
        r#"{"vertices":[{"id":"a","genus":0,"self_int":-1},{"id":"b","genus":0,"self_int":-1}],"edges":[["a","b",1]]}"#,
    )
    .unwrap();
    let o = normred(&["graph", "--file", path_str(&f)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("negative definite"));
    assert_eq!(normred(&["graph", "--file", "/nonexistent/g.json"]).status.code(), Some(2));
}

#[test]
fn star_graph_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("star_d4_r2.json");
    let o = normred(&["star", "--d", "4", "--r", "2", "--graph-out", path_str(&f)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let star = stdout(&o);
    assert_eq!(table_value(&star, "p_a(Z_X)").as_deref(), Some("3"));
    assert_eq!(table_value(&star, "p_g-ideal").as_deref(), Some("true"));

    let text = std::fs::read_to_string(&f).unwrap();
    let parsed = normred::graph_file::GraphFile::parse(&text).unwrap();
    assert_eq!(parsed.to_json(), text);

    let o = normred(&["graph", "--file", path_str(&f)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let graph = stdout(&o);
    for id in ["Z_X", "p_a(Z_X)", "Z_r", "Z_r anti-nef", "C_r", "-Z_B E_0"] {
        assert_eq!(table_value(&graph, id), table_value(&star, id), "{id}");
    }
    assert!(!graph.contains("FAIL"));
}

#[test]
fn curve_bounds() {
    let o = normred(&["hyperelliptic", "--g", "3", "--b", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let t = stdout(&o);
    assert_eq!(table_value(&t, "br bound [[(2g-2)/gonality]] + 1").as_deref(), Some("4"));
    // p_g = h^1(0) + h^1(D) + h^1(2D) = 3 + 2 + 1
    assert!(t.contains("  pg=6 "), "{t}");

    let o = normred(&["ci-bound", "--degrees", "2,2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let t = stdout(&o);
    assert_eq!(table_value(&t, "genus").as_deref(), Some("1"));
    assert_eq!(table_value(&t, "nr(m) prediction a + 2").as_deref(), Some("2"));
}

#[test]
fn acceptance_subset_passes() {
    let o = normred(&["accept", "--criterion", "4"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let t = stdout(&o);
    assert!(t.starts_with("[PASS] criterion 4:"), "{t}");
    assert!(t.contains("acceptance: 1 of 1 criteria passed"));
}

#[test]
fn injected_fault_fails_acceptance() {
    let o = normred(&["accept", "--criterion", "3", "--inject-fault"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("[FAIL] criterion 3:"));
    assert!(stderr(&o).contains("acceptance failed at criterion 3"));
}
