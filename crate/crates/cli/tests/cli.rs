use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use tempfile::TempDir;

const TABLE1: &str = "age,education,relationship,race,sex\n\
39,bachelors,not-in-family,white,male\n\
50,bachelors,husband,white,male\n\
38,hs-grad,not-in-family,white,male\n\
34,hs-grad,husband,white,female\n";

const FIG1_GRAPH: &str = "nodes A B C D E F\nA D\nA E\nB D\nB E\nB F\nC F\n";

fn indep(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_indep"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("bad json ({e}): {}", stdout(o)))
}

fn random_csv(rng: &mut impl Rng, cols: usize, rows: usize, domain: u32) -> String {
    let mut text: String = (0..cols).map(|c| format!("c{c}")).collect::<Vec<_>>().join(",");
    text.push('\n');
    for _ in 0..rows {
        let row: Vec<String> = (0..cols)
            .map(|_| match rng.gen_range(0..=domain) {
                0 if rng.gen_bool(0.3) => "?".to_string(),
                v => v.to_string(),
            })
            .collect();
        text.push_str(&row.join(","));
        text.push('\n');
    }
    text
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    csv::Reader::from_reader(text.as_bytes())
        .records()
        .map(|r| r.unwrap().iter().map(str::to_string).collect())
        .collect()
}

fn statements(cover: &Value) -> BTreeSet<(Vec<String>, Vec<String>)> {
    cover
        .as_array()
        .unwrap()
        .iter()
        .map(|e| {
            let side = |k: &str| e[k].as_array().unwrap().iter().map(|v| v.as_str().unwrap().to_string()).collect();
            (side("left"), side("right"))
        })
        .collect()
}

fn check_schema(doc: &Value) {
    let text = fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../../schema/report.schema.json")).unwrap();
    let schema: Value = serde_json::from_str(&text).unwrap();
    let compiled = jsonschema::JSONSchema::compile(&schema).expect("schema compiles");
    let msgs: Vec<String> = match compiled.validate(doc) {
        Ok(()) => return,
        Err(errors) => errors.map(|e| format!("{} at {}", e, e.instance_path)).collect(),
    };
    panic!("report violates schema: {msgs:?}");
}

/// Drops fields that vary between otherwise identical runs.
fn strip_volatile(doc: &mut Value) {
    let m = doc["manifest"].as_object_mut().unwrap();
    m.remove("started");
    m.remove("finished");
    m.remove("threads");
    for l in doc["levels"].as_array_mut().unwrap() {
        l.as_object_mut().unwrap().remove("elapsed_ms");
    }
}

#[test]
fn discover_on_table1_finds_one_member_and_drops_race() {
    let dir = TempDir::new().unwrap();
    let t1 = write(&dir, "t1.csv", TABLE1);
    let o = indep(&["discover", s(&t1)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let doc = json(&o);
    check_schema(&doc);
    assert_eq!(doc["constant_columns"], serde_json::json!(["race"]));
    assert_eq!(doc["cover_size"], 1);
    assert_eq!(doc["max_arity"], 2);
    let e = &doc["cover"][0];
    assert_eq!(e["left"], serde_json::json!(["education"]));
    assert_eq!(e["right"], serde_json::json!(["relationship"]));
    assert_eq!(e["fraction"], "4/4");
    assert_eq!(e["ratio"], "1.000000");
    assert_eq!(doc["manifest"]["config"]["epsilon"], "1/1");
    assert_eq!(doc["levels"][0]["candidates_generated"], 6);
    assert_eq!(doc["levels"][1]["candidates_validated"], 0);
}

#[test]
fn keeping_constant_columns_adds_race_statements() {
    let dir = TempDir::new().unwrap();
    let t1 = write(&dir, "t1.csv", TABLE1);
    let doc = json(&indep(&["discover", s(&t1), "--keep-constant-columns"]));
    assert_eq!(doc["constant_columns"], serde_json::json!([]));
    let all = statements(&doc["cover"]);
    assert!(all.iter().any(|(l, r)| l.contains(&"race".to_string()) || r.contains(&"race".to_string())));
}

#[test]
fn csv_cover_output_and_out_file() {
    let dir = TempDir::new().unwrap();
    let t1 = write(&dir, "t1.csv", TABLE1);
    let out = dir.path().join("cover.csv");
    let o = indep(&["discover", s(&t1), "--format", "csv", "--out", s(&out)]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let text = fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("left,right,arity,ratio,fraction,vacuous\n"));
    assert_eq!(csv_rows(&text), vec![vec!["education", "relationship", "2", "1.000000", "4/4", "false"]]);
}

#[test]
fn stdin_input_matches_file_input() {
    let dir = TempDir::new().unwrap();
    let t1 = write(&dir, "t1.csv", TABLE1);
    let child = Command::new(env!("CARGO_BIN_EXE_indep"))
        .args(["discover", "-"])
        .stdin(fs::File::open(&t1).unwrap())
        .output()
        .unwrap();
    assert_eq!(code(&child), 0);
    let mut a = json(&child);
    let mut b = json(&indep(&["discover", s(&t1)]));
    strip_volatile(&mut a);
    strip_volatile(&mut b);
    a["manifest"]["input"]["path"] = Value::Null;
    b["manifest"]["input"]["path"] = Value::Null;
    assert_eq!(a, b);
}

#[test]
fn reduce_cover_removes_implied_members_with_traces() {
    // Full product of three binary columns: every statement holds and the
    // three arity-3 members imply one another pairwise.
    let mut text = String::from("a,b,c\n");
    for i in 0..8 {
        text.push_str(&format!("{},{},{}\n", i & 1, (i >> 1) & 1, (i >> 2) & 1));
    }
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "cube.csv", &text);
    let plain = json(&indep(&["discover", s(&p)]));
    assert_eq!(plain["cover_size"], 3);

    let o = indep(&["discover", s(&p), "--reduce-cover", "--trace"]);
    assert_eq!(code(&o), 0);
    let doc = json(&o);
    check_schema(&doc);
    let red = &doc["reduction"];
    assert_eq!(red["quasi_cover_size"], 3);
    let removed = red["removed"].as_array().unwrap();
    assert!(!removed.is_empty());
    assert_eq!(doc["cover_size"].as_u64().unwrap() as usize + removed.len(), 3);
    for r in removed {
        assert!(!r["trace"].as_array().unwrap().is_empty());
    }

    let untraced = json(&indep(&["discover", s(&p), "--reduce-cover"]));
    assert!(untraced["reduction"]["removed"][0].get("trace").is_none());
}

#[test]
fn trace_without_reduce_cover_is_a_usage_error() {
    let dir = TempDir::new().unwrap();
    let t1 = write(&dir, "t1.csv", TABLE1);
    assert_eq!(code(&indep(&["discover", s(&t1), "--trace"])), 2);
}

#[test]
fn degenerate_relation_exits_3_and_still_writes_the_report() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "d.csv", "a,b\n1,x\n1,x\n");
    let out = dir.path().join("d.json");
    let o = indep(&["discover", s(&p), "--out", s(&out)]);
    assert_eq!(code(&o), 3);
    let doc: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    check_schema(&doc);
    assert_eq!(doc["degenerate"], true);
    assert_eq!(doc["cover_size"], 0);
}

#[test]
fn input_errors_exit_2() {
    let dir = TempDir::new().unwrap();
    let missing = dir.path().join("missing.csv");
    assert_eq!(code(&indep(&["discover", s(&missing)])), 2);
    let ragged = write(&dir, "ragged.csv", "a,b\n1,2\n3\n");
    assert_eq!(code(&indep(&["discover", s(&ragged)])), 2);
    let t1 = write(&dir, "t1.csv", TABLE1);
    assert_eq!(code(&indep(&["discover", s(&t1), "--epsilon", "1.5"])), 2);
    assert_eq!(code(&indep(&["discover", s(&t1), "--max-arity", "1"])), 2);
}

#[test]
fn approximate_threshold_accepts_fractions() {
    let dir = TempDir::new().unwrap();
    let t1 = write(&dir, "t1.csv", TABLE1);
    let a = json(&indep(&["discover", s(&t1), "--epsilon", "3/4"]));
    let b = json(&indep(&["discover", s(&t1), "--epsilon", "0.75"]));
    assert_eq!(a["manifest"]["config"]["epsilon"], b["manifest"]["config"]["epsilon"]);
    assert_eq!(a["cover"], b["cover"]);
    // education⊥sex has ratio 3/4.
    assert!(statements(&a["cover"]).contains(&(vec!["education".into()], vec!["sex".into()])));
}

#[test]
fn verify_matches_on_table1_and_small_inputs() {
    let dir = TempDir::new().unwrap();
    let t1 = write(&dir, "t1.csv", TABLE1);
    let o = indep(&["verify", s(&t1)]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).lines().any(|l| l == "match"));

    let one = write(&dir, "one.csv", "a\n1\n2\n");
    let o = indep(&["verify", s(&one)]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("cover 0"));
}

#[test]
fn verify_over_budget_exits_2() {
    let dir = TempDir::new().unwrap();
    let t1 = write(&dir, "t1.csv", TABLE1);
    assert_eq!(code(&indep(&["verify", s(&t1), "--max-attributes", "3"])), 2);
    assert_eq!(code(&indep(&["verify", s(&t1), "--max-rows", "2"])), 2);
}

#[test]
fn verify_agrees_on_random_relations() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let dir = TempDir::new().unwrap();
    for i in 0..24 {
        let cols = rng.gen_range(2..=5);
        let rows = rng.gen_range(1..=12);
        let p = write(&dir, &format!("r{i}.csv"), &random_csv(&mut rng, cols, rows, 2));
        for extra in [&["--na", "value"][..], &["--na", "ignore", "--no-prune"], &["--epsilon", "0.8", "--no-prune"]] {
            let mut args = vec!["verify", s(&p)];
            args.extend_from_slice(extra);
            let o = indep(&args);
            assert_eq!(code(&o), 0, "relation {i} {extra:?}: {}", stdout(&o));
        }
    }
}

#[test]
fn generate_fig1_graph_yields_13_rows_and_truth() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "fig1.txt", FIG1_GRAPH);
    let out = dir.path().join("fig1.csv");
    let o = indep(&["generate", "--graph", s(&g), "--out", s(&out)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("A,B,C,D,E,F\n"));
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 13);
    let distinct: BTreeSet<_> = rows.iter().collect();
    assert_eq!(distinct.len(), 13);
    for edge in [["A", "D"], ["B", "F"], ["C", "F"]] {
        let idx: Vec<usize> = edge.iter().map(|n| (n.as_bytes()[0] - b'A') as usize).collect();
        assert!(rows.iter().any(|r| r.iter().enumerate().all(|(i, v)| (v == "1") == idx.contains(&i))));
    }

    let truth: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("fig1.csv.truth.json")).unwrap()).unwrap();
    assert_eq!(truth["rows"], 13);
    assert_eq!(truth["truth"]["kind"], "graph");
    assert_eq!(truth["truth"]["max_biclique"]["size"], 4);
    assert_eq!(truth["truth"]["expected_max_arity"], 4);

    let doc = json(&indep(&["discover", s(&out)]));
    assert_eq!(doc["max_arity"], 4);
}

#[test]
fn generated_relations_match_their_sidecar() {
    let dir = TempDir::new().unwrap();
    for seed in 0..6u64 {
        for (kind, size) in [("--random-graph", "6"), ("--random-formula", "4")] {
            let out = dir.path().join(format!("{}-{seed}.csv", &kind[2..]));
            let seed_s = seed.to_string();
            let o = indep(&["generate", kind, "--size", size, "--seed", &seed_s, "--out", s(&out)]);
            assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
            let mut side = out.clone().into_os_string();
            side.push(".truth.json");
            let truth: Value = serde_json::from_str(&fs::read_to_string(&side).unwrap()).unwrap();
            let expected = truth["truth"]["expected_max_arity"].as_u64().unwrap();
            let run = indep(&["discover", s(&out), "--keep-constant-columns"]);
            let doc = json(&run);
            assert_eq!(doc["max_arity"].as_u64().unwrap(), expected, "{kind} seed {seed}");
        }
    }
}

#[test]
fn generate_is_deterministic_per_seed() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for out in [&a, &b] {
        assert_eq!(code(&indep(&["generate", "--random-formula", "--seed", "9", "--out", s(out)])), 0);
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}

#[test]
fn generate_rejects_empty_or_malformed_descriptions() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("x.csv");
    let empty = write(&dir, "empty.txt", "# nothing\n\n");
    assert_eq!(code(&indep(&["generate", "--formula", s(&empty), "--out", s(&out)])), 2);
    assert_eq!(code(&indep(&["generate", "--graph", s(&empty), "--out", s(&out)])), 2);
    let bad = write(&dir, "bad.txt", "A B C\n");
    assert_eq!(code(&indep(&["generate", "--graph", s(&bad), "--out", s(&out)])), 2);
    assert_eq!(code(&indep(&["generate", "--out", s(&out)])), 2);
}

#[test]
fn sweep_validity_is_monotone_down_the_thresholds() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let dir = TempDir::new().unwrap();
    for i in 0..6 {
        let p = write(&dir, &format!("s{i}.csv"), &random_csv(&mut rng, 5, 20, 3));
        let o = indep(&["sweep", s(&p), "--epsilon", "1,0.9,0.8", "--format", "json"]);
        assert_eq!(code(&o), 0);
        let doc = json(&o);
        let runs = doc["runs"].as_array().unwrap();
        assert_eq!(runs.len(), 3);
        for w in runs.windows(2) {
            let hi = statements(&w[0]["cover"]);
            let lo = statements(&w[1]["cover"]);
            for (l, r) in &hi {
                let covered = lo.iter().any(|(l2, r2)| {
                    let sub = |a: &Vec<String>, b: &Vec<String>| a.iter().all(|x| b.contains(x));
                    (sub(l, l2) && sub(r, r2)) || (sub(l, r2) && sub(r, l2))
                });
                assert!(covered, "relation {i}: {l:?}⊥{r:?} lost at lower threshold");
            }
        }
    }
}

#[test]
fn sweep_with_one_threshold_equals_discover() {
    let dir = TempDir::new().unwrap();
    let t1 = write(&dir, "t1.csv", TABLE1);
    let sweep = json(&indep(&["sweep", s(&t1), "--epsilon", "1", "--format", "json"]));
    let disc = json(&indep(&["discover", s(&t1)]));
    assert_eq!(sweep["runs"][0]["cover"], disc["cover"]);

    let o = indep(&["sweep", s(&t1), "--epsilon", "1,0.5"]);
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0][0], "1");
    assert_eq!(rows[1][0], "0.5");
}

#[test]
fn sweep_rejects_ascending_thresholds() {
    let dir = TempDir::new().unwrap();
    let t1 = write(&dir, "t1.csv", TABLE1);
    assert_eq!(code(&indep(&["sweep", s(&t1), "--epsilon", "0.5,1"])), 2);
}

#[test]
fn arity_curve_starts_with_all_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let dir = TempDir::new().unwrap();
    for n in 2..=6usize {
        let p = write(&dir, &format!("a{n}.csv"), &random_csv(&mut rng, n, 30, 4));
        let o = indep(&["bench", s(&p), "--arity-curve"]);
        assert_eq!(code(&o), 0);
        let rows = csv_rows(&stdout(&o));
        let cols: usize = rows[0][2].parse().unwrap();
        assert_eq!(rows[0][0], "arity");
        assert_eq!(rows[0][1], "2");
        assert_eq!(rows[0][6].parse::<usize>().unwrap(), cols * (cols - 1) / 2);
    }
}

#[test]
fn row_curve_grows_by_the_step() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "rows.csv", &random_csv(&mut rng, 4, 23, 3));
    let o = indep(&["bench", s(&p), "--row-curve", "5", "--seed", "2"]);
    assert_eq!(code(&o), 0);
    let rows = csv_rows(&stdout(&o));
    let sizes: Vec<usize> = rows.iter().map(|r| r[3].parse().unwrap()).collect();
    assert_eq!(sizes, vec![5, 10, 15, 20, 23]);
    assert!(rows.iter().all(|r| r[0] == "rows" && r[1] == r[3]));
    let again = indep(&["bench", s(&p), "--row-curve", "5", "--seed", "2"]);
    let counts = |t: &str| csv_rows(t).into_iter().map(|r| r[5].clone()).collect::<Vec<_>>();
    assert_eq!(counts(&stdout(&o)), counts(&stdout(&again)));
    assert_eq!(code(&indep(&["bench", s(&p), "--row-curve", "0"])), 2);
}

#[test]
fn column_curve_uses_named_subsets() {
    let dir = TempDir::new().unwrap();
    let t1 = write(&dir, "t1.csv", TABLE1);
    let o = indep(&["bench", s(&t1), "--column-curve", "education,relationship;age,education,relationship"]);
    assert_eq!(code(&o), 0);
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0][1], "2");
    assert_eq!(rows[0][5], "1");
    assert_eq!(rows[1][1], "3");
    assert_eq!(code(&indep(&["bench", s(&t1), "--column-curve", "nosuch,age"])), 2);
    let random = indep(&["bench", s(&t1), "--column-curve", "random"]);
    assert_eq!(csv_rows(&stdout(&random)).len(), 4);
}

#[test]
fn reports_are_deterministic_across_thread_counts() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "det.csv", &random_csv(&mut rng, 7, 60, 3));
    let mut a = json(&indep(&["--threads", "1", "discover", s(&p), "--na", "ignore"]));
    let mut b = json(&indep(&["discover", s(&p), "--na", "ignore", "--threads", "4"]));
    assert_eq!(a["manifest"]["threads"], 1);
    check_schema(&a);
    strip_volatile(&mut a);
    strip_volatile(&mut b);
    assert_eq!(a, b);
}
