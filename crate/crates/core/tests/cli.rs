use std::collections::BTreeSet;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use katflow::io::PackingDocument;
use tempfile::TempDir;

const TRIANGLE: &str = r#"{"n": 3, "edges": [[0, 1], [1, 2], [0, 2]]}"#;
const OCTAHEDRON: &str =
    r#"{"n": 6, "edges": [[0,1],[0,2],[0,3],[0,4],[1,2],[2,3],[3,4],[1,4],[5,1],[5,2],[5,3],[5,4]]}"#;
const SQUARE: &str = r#"{"n": 4, "edges": [[0, 1], [1, 2], [2, 3], [3, 0]]}"#;
const K5: &str = r#"{"n": 5, "edges": [[0,1],[0,2],[0,3],[0,4],[1,2],[1,3],[1,4],[2,3],[2,4],[3,4]]}"#;

fn katflow(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_katflow")).args(args).output().expect("binary runs")
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn path(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_str().unwrap().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn solve_triangle() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g.json", TRIANGLE);
    let out = path(&dir, "p.json");
    let o = katflow(&["solve", "--graph", &g, "--out", &out]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let doc = PackingDocument::read(Path::new(&out)).unwrap();
    assert_eq!(doc.disks.len(), 3);
    assert_eq!(doc.contacts, vec![[0, 1], [0, 2], [1, 2]]);
    assert_eq!(doc.meta.flip_count, Some(0));
    assert!(doc.meta.graph_sha256.is_some());
}

#[test]
fn solve_writes_svg_report_and_frames() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g.json", SQUARE);
    let (out, svg, report, frames) =
        (path(&dir, "p.json"), path(&dir, "p.svg"), path(&dir, "r.json"), path(&dir, "frames"));
    let o = katflow(&["solve", "--graph", &g, "--out", &out, "--svg", &svg, "--report", &report, "--frames", &frames]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let svg_text = fs::read_to_string(&svg).unwrap();
    assert_eq!(svg_text.matches("<circle").count(), 4);
    assert_eq!(svg_text.matches("<line").count(), 4);
    let rep: serde_json::Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(rep["augmentation"].as_array().unwrap().len(), 2);
    assert_eq!(rep["verification"]["contact_graph_exact"], true);
    assert!(fs::read_dir(&frames).unwrap().count() > 0);
    let doc = PackingDocument::read(Path::new(&out)).unwrap();
    assert_eq!(doc.contacts.len(), 4);
}

#[test]
fn solve_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g.json", OCTAHEDRON);
    let run = |name: &str, seed: &str| {
        let (out, svg) = (path(&dir, &format!("{name}.json")), path(&dir, &format!("{name}.svg")));
        let o = katflow(&["solve", "--graph", &g, "--out", &out, "--svg", &svg, "--seed", seed]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        (fs::read(out).unwrap(), fs::read(svg).unwrap())
    };
    let a = run("a", "7");
    let b = run("b", "7");
    assert_eq!(a, b);
}

#[test]
fn bad_inputs_exit_2() {
    let dir = TempDir::new().unwrap();
    let out = path(&dir, "p.json");
    let cases = [
        ("k5.json", K5, "not planar"),
        ("bad.json", "{\"n\": 3, \"edges\": [[0, 1]", "EOF"),
        ("range.json", r#"{"n": 2, "edges": [[0, 5]]}"#, "out of range"),
        ("loop.json", r#"{"n": 2, "edges": [[1, 1]]}"#, "self-loop"),
    ];
    for (name, text, msg) in cases {
        let g = write(&dir, name, text);
        let o = katflow(&["solve", "--graph", &g, "--out", &out]);
        assert_eq!(o.status.code(), Some(2), "{name}");
        assert!(stderr(&o).contains(msg), "{name}: {}", stderr(&o));
    }
    let o = katflow(&["solve", "--graph", &path(&dir, "missing.json"), "--out", &out]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(katflow(&["solve"]).status.code(), Some(2));
    assert_eq!(katflow(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(katflow(&["--help"]).status.code(), Some(0));
}

#[test]
fn verify_accepts_solution_and_rejects_tampering() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g.json", OCTAHEDRON);
    let out = path(&dir, "p.json");
    assert_eq!(katflow(&["solve", "--graph", &g, "--out", &out]).status.code(), Some(0));
    let o = katflow(&["verify", "--packing", &out, "--graph", &g]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));

    let mut doc = PackingDocument::read(Path::new(&out)).unwrap();
    doc.disks[5].r *= 1.01;
    let bad = path(&dir, "bad.json");
    doc.write(Path::new(&bad)).unwrap();
    let o = katflow(&["verify", "--packing", &bad, "--graph", &g]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    for v in [1, 2, 3, 4] {
        assert!(text.contains(&format!("({v}, 5): edge not tangent")), "{text}");
    }

    let tri = write(&dir, "t.json", TRIANGLE);
    assert_eq!(katflow(&["verify", "--packing", &out, "--graph", &tri]).status.code(), Some(2));
}

fn frame_edges(svg: &str, dashed: bool) -> BTreeSet<String> {
    svg.lines()
        .filter(|l| l.starts_with("<line") && l.contains("stroke-dasharray") == dashed)
        .map(|l| l.split('"').nth(1).unwrap().to_string())
        .collect()
}

fn caption_value(svg: &str, key: &str) -> f64 {
    let i = svg.find(key).unwrap() + key.len();
    svg[i..].split_whitespace().next().unwrap().trim_end_matches("</text>").parse().unwrap()
}

#[test]
fn flow_demo_frames_show_the_flip() {
    let dir = TempDir::new().unwrap();
    let frames = path(&dir, "f");
    let out = path(&dir, "h.json");
    let o = katflow(&["flow-demo", "--n", "5", "--frames", &frames, "--out", &out]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("(0, 3) -> (2, 4)"));

    let mut names: Vec<_> = fs::read_dir(&frames).unwrap().map(|e| e.unwrap().path()).collect();
    names.sort();
    let svgs: Vec<String> = names.iter().map(|p| fs::read_to_string(p).unwrap()).collect();
    assert!(svgs.len() >= 3);
    let g: BTreeSet<String> =
        ["0-1", "0-2", "0-3", "0-4", "1-2", "1-3", "1-4", "2-3", "3-4"].iter().map(|s| s.to_string()).collect();
    let mut h = g.clone();
    h.remove("0-3");
    h.insert("2-4".into());
    assert_eq!(frame_edges(&svgs[0], false), g);
    assert_eq!(frame_edges(svgs.last().unwrap(), false), h);
    for s in &svgs {
        assert_eq!(frame_edges(s, true), ["0-3", "2-4"].iter().map(|s| s.to_string()).collect());
    }
    // the e- gap opens and the e+ gap closes monotonically
    let minus: Vec<f64> = svgs.iter().map(|s| caption_value(s, "invdist(e-) = ")).collect();
    let plus: Vec<f64> = svgs.iter().map(|s| caption_value(s, "invdist(e+) = ")).collect();
    assert!(minus.windows(2).all(|w| w[1] >= w[0]), "{minus:?}");
    assert!(plus.windows(2).all(|w| w[1] <= w[0]), "{plus:?}");
    assert!((plus.last().unwrap() - 1.0).abs() < 1e-6);

    let doc = PackingDocument::read(Path::new(&out)).unwrap();
    let contacts: BTreeSet<String> = doc.contacts.iter().map(|[a, b]| format!("{a}-{b}")).collect();
    assert_eq!(contacts, h);
}

#[test]
fn flow_demo_needs_five_vertices() {
    assert_eq!(katflow(&["flow-demo", "--n", "4"]).status.code(), Some(2));
}

#[test]
fn solve_handles_disconnected_and_cut_vertex_graphs() {
    let dir = TempDir::new().unwrap();
    let graphs = [
        r#"{"n": 4, "edges": [[0, 1]]}"#,
        r#"{"n": 5, "edges": []}"#,
        r#"{"n": 5, "edges": [[0, 1], [1, 2], [0, 2], [2, 3], [3, 4], [2, 4]]}"#,
        r#"{"n": 7, "edges": [[0, 1], [1, 2], [2, 0], [4, 5], [5, 6], [6, 4]]}"#,
        r#"{"n": 2, "edges": [[0, 1]]}"#,
        r#"{"n": 1, "edges": []}"#,
    ];
    for (k, text) in graphs.iter().enumerate() {
        let g = write(&dir, &format!("g{k}.json"), text);
        let out = path(&dir, &format!("p{k}.json"));
        let o = katflow(&["solve", "--graph", &g, "--out", &out]);
        assert_eq!(o.status.code(), Some(0), "{text}: {}", stderr(&o));
        let o = katflow(&["verify", "--packing", &out, "--graph", &g]);
        assert_eq!(o.status.code(), Some(0), "{text}: {}", stdout(&o));
    }
}
