use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn fixture() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures/eight_node.json")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("formation-cli-{}-{name}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_formation")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn json(o: &Output) -> Value {
    assert!(o.status.success(), "{}", stderr(o));
    serde_json::from_slice(&o.stdout).unwrap()
}

fn degrees(graph: &Value) -> HashMap<u64, usize> {
    let mut d: HashMap<u64, usize> = graph["vertices"].as_array().unwrap().iter().map(|v| (v["id"].as_u64().unwrap(), 0)).collect();
    for e in graph["edges"].as_array().unwrap() {
        *d.get_mut(&e["u"].as_u64().unwrap()).unwrap() += 1;
        *d.get_mut(&e["v"].as_u64().unwrap()).unwrap() += 1;
    }
    d
}

fn connected(graph: &Value) -> bool {
    let d = degrees(graph);
    let Some(&first) = d.keys().min() else { return true };
    let mut seen = vec![first];
    let mut stack = vec![first];
    while let Some(v) = stack.pop() {
        for e in graph["edges"].as_array().unwrap() {
            let (a, b) = (e["u"].as_u64().unwrap(), e["v"].as_u64().unwrap());
            let next = if a == v { b } else if b == v { a } else { continue };
            if !seen.contains(&next) {
                seen.push(next);
                stack.push(next);
            }
        }
    }
    seen.len() == d.len()
}

#[test]
fn plan_four_robots() {
    let g = fixture();
    let plan = json(&run(&["plan", "--graph", g.to_str().unwrap(), "--robots", "4", "--start", "1", "--goal", "7"]));
    assert_eq!(plan["formation_cost"], 449);
    let costs: Vec<u64> = plan["robots"].as_array().unwrap().iter().map(|r| r["cost"].as_u64().unwrap()).collect();
    assert_eq!(costs, [449, 420, 397, 390]);
}

#[test]
fn plan_ten_robots() {
    let g = fixture();
    let plan = json(&run(&["plan", "--graph", g.to_str().unwrap(), "--robots", "10", "--start", "1", "--goal", "7"]));
    assert_eq!(plan["formation_cost"], 606);
}

#[test]
fn plan_table_without_goal() {
    let g = fixture();
    let table = json(&run(&["plan", "--graph", g.to_str().unwrap(), "--robots", "1", "--start", "1"]));
    let rows = table["table"].as_array().unwrap();
    assert_eq!(rows.len(), 8);
    let at7 = rows.iter().find(|r| r["node"] == 7).unwrap();
    assert_eq!(at7["cost"], 299);
}

#[test]
fn state_cap_is_exit_three() {
    let g = fixture();
    let o = run(&["plan", "--graph", g.to_str().unwrap(), "--robots", "4", "--start", "1", "--max-states", "10"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn unknown_start_is_exit_two() {
    let g = fixture();
    let o = run(&["plan", "--graph", g.to_str().unwrap(), "--robots", "2", "--start", "99"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_fixture() {
    let g = fixture();
    let o = run(&["verify", "--graph", g.to_str().unwrap(), "--robots", "4", "--start", "1", "--goal", "7"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("planner: 449"));
    assert!(stdout(&o).contains("oracle:  449"));
    assert!(stdout(&o).contains("PASS"));

    let o = run(&["verify", "--graph", g.to_str().unwrap(), "--robots", "2", "--start", "1", "--goal", "7"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("planner: 377"));
}

#[test]
fn verify_random_graph() {
    let dir = scratch("verify");
    let g = dir.join("g.json");
    let o = run(&["gen", "--seed", "42", "--vertices", "6", "--robots", "3", "--out", g.to_str().unwrap()]);
    assert!(o.status.success());
    let o = run(&["verify", "--graph", g.to_str().unwrap(), "--robots", "3", "--start", "1", "--goal", "6"]);
    assert_eq!(o.status.code(), Some(0), "{}{}", stdout(&o), stderr(&o));
    assert!(stdout(&o).contains("PASS"));
}

#[test]
fn plan_render_verify_round_trip() {
    let dir = scratch("round");
    let g = fixture();
    let plan = dir.join("plan.json");
    let svg = dir.join("fig.svg");
    let o = run(&["plan", "--graph", g.to_str().unwrap(), "--robots", "4", "--start", "1", "--goal", "7", "--out", plan.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let o = run(&["render", "--graph", g.to_str().unwrap(), "--plan", plan.to_str().unwrap(), "--out", svg.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = fs::read_to_string(&svg).unwrap();
    // edge 1-2 has id 0 in the fixture and carries two robots
    let label = text.lines().find(|l| l.contains(r#"class="count" data-edge="0""#)).unwrap();
    assert!(label.ends_with(">2</text>"), "{label}");
    assert!(text.contains("[162,182,202,222,242,262,282,302,322,342]"));
    let o = run(&["verify", "--graph", g.to_str().unwrap(), "--robots", "4", "--start", "1", "--goal", "7"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn render_graph_only_and_without_positions() {
    let dir = scratch("render");
    let o = run(&["render", "--graph", fixture().to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).matches(r#"class="vertex""#).count(), 8);

    let g = dir.join("bare.json");
    fs::write(&g, r#"{"vertices":[{"id":1},{"id":2}],"edges":[{"id":0,"u":1,"v":2,"costs":[5]}]}"#).unwrap();
    let o = run(&["render", "--graph", g.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("no geometry to render"));
}

#[test]
fn gen_is_deterministic() {
    let a = run(&["gen", "--seed", "1", "--vertices", "6", "--robots", "2"]);
    let b = run(&["gen", "--seed", "1", "--vertices", "6", "--robots", "2"]);
    assert_eq!(a.stdout, b.stdout);
    let g = json(&a);
    assert!(connected(&g));
    assert!(degrees(&g).values().all(|&d| d <= 3));

    let single = json(&run(&["gen", "--seed", "3", "--vertices", "1", "--robots", "2"]));
    assert_eq!(single["vertices"].as_array().unwrap().len(), 1);
    assert!(single["edges"].as_array().unwrap().is_empty());
}

#[test]
fn build_square_map() {
    let dir = scratch("build");
    let map = dir.join("square.json");
    fs::write(&map, r#"{"border":[[0,0],[100,0],[100,100],[0,100]],"obstacles":[[[40,40],[60,40],[60,60],[40,60]]]}"#).unwrap();
    let g = json(&run(&[
        "build", "--map", map.to_str().unwrap(), "--step", "5", "--start", "10,10", "--goal", "90,85", "--robots", "3",
    ]));
    assert!(degrees(&g).values().all(|&d| d <= 3));
    assert!(connected(&g));
    let terminals: Vec<&Value> = g["vertices"].as_array().unwrap().iter().filter(|v| v["terminal"] == true).collect();
    assert_eq!(terminals.len(), 2);
    assert!(terminals.iter().any(|v| v["x"] == 10.0 && v["y"] == 10.0));
    assert!(g["edges"].as_array().unwrap().iter().all(|e| e["costs"].as_array().unwrap().len() == 3));

    let (start, goal) = (terminals[0]["id"].to_string(), terminals[1]["id"].to_string());
    let graph = dir.join("g.json");
    fs::write(&graph, serde_json::to_string(&g).unwrap()).unwrap();
    let plan = json(&run(&["plan", "--graph", graph.to_str().unwrap(), "--robots", "3", "--start", &start, "--goal", &goal]));
    assert!(plan["formation_cost"].as_u64().unwrap() > 0);
}

#[test]
fn build_linear_model() {
    let dir = scratch("linear");
    let map = dir.join("square.json");
    fs::write(&map, r#"{"border":[[0,0],[100,0],[100,100],[0,100]]}"#).unwrap();
    let g = json(&run(&[
        "build", "--map", map.to_str().unwrap(), "--step", "10", "--start", "20,20", "--goal", "80,70",
        "--cost-model", "linear", "--base", "1", "--slope", "0.5", "--robots", "2",
    ]));
    for e in g["edges"].as_array().unwrap() {
        let c = e["costs"].as_array().unwrap();
        assert!(c[0].as_u64() <= c[1].as_u64());
    }
}

#[test]
fn build_without_free_space() {
    let dir = scratch("full");
    let map = dir.join("full.json");
    fs::write(&map, r#"{"border":[[0,0],[4,0],[4,4],[0,4]],"obstacles":[[[0,0],[4,0],[4,4],[0,4]]]}"#).unwrap();
    let o = run(&["build", "--map", map.to_str().unwrap(), "--robots", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("free space empty"));
}
