//! End-to-end driver tests: generate / plan / replay, exit codes, and the
//! trace format counts.

use std::path::PathBuf;
use std::process::Command;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_rodring")
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("rodring-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn generate_is_seed_deterministic() {
    let a = tmp("gen-a.scene");
    let b = tmp("gen-b.scene");
    for out in [&a, &b] {
        let st = Command::new(bin())
            .args(["generate", "--count", "25", "--seed", "9"])
            .arg("--out")
            .arg(out)
            .status()
            .unwrap();
        assert!(st.success());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn plan_replay_trace_round_trip() {
    // Empty scene: start and goal share one FREE box, so the path has two
    // waypoints and the trace counts are forced.
    let scene_path = tmp("empty.scene");
    std::fs::write(&scene_path, "scene v1\nworld 0 0 0 512 512 512\n").unwrap();
    let result_path = tmp("rod.json");
    let trace_path = tmp("rod.trace");
    let st = Command::new(bin())
        .args([
            "plan", "--robot", "rod", "--length", "64", "--eps", "8",
            "--start", "64,64,64,1,0,0", "--goal", "448,64,64,1,0,0",
        ])
        .arg("--scene")
        .arg(&scene_path)
        .arg("--out")
        .arg(&result_path)
        .arg("--trace")
        .arg(&trace_path)
        .status()
        .unwrap();
    assert_eq!(st.code(), Some(0));

    let trace = std::fs::read_to_string(&trace_path).unwrap();
    let mut section = "";
    let (mut path_segs, mut fp_segs, mut box_segs) = (0, 0, 0);
    for line in trace.lines() {
        if let Some(rest) = line.strip_prefix('#') {
            section = match rest.trim() {
                "path" => "path",
                "footprints" => "fp",
                "boxes" => "boxes",
                _ => section,
            };
            continue;
        }
        assert_eq!(line.split_whitespace().count(), 6, "bad soup line: {line}");
        match section {
            "path" => path_segs += 1,
            "fp" => fp_segs += 1,
            "boxes" => box_segs += 1,
            _ => panic!("segment before any section"),
        }
    }
    // 2 waypoints: 1 path segment, 2 rod footprints (1 segment each), one
    // on-path box wireframe (12 edges).
    assert_eq!(path_segs, 1);
    assert_eq!(fp_segs, 2);
    assert_eq!(box_segs, 12);

    let st = Command::new(bin())
        .args(["replay"])
        .arg("--scene")
        .arg(&scene_path)
        .arg("--result")
        .arg(&result_path)
        .status()
        .unwrap();
    assert_eq!(st.code(), Some(0));

    // Re-exporting from the result document reproduces the trace.
    let trace2_path = tmp("rod2.trace");
    let st = Command::new(bin())
        .args(["export-trace"])
        .arg("--result")
        .arg(&result_path)
        .arg("--out")
        .arg(&trace2_path)
        .status()
        .unwrap();
    assert_eq!(st.code(), Some(0));
    assert_eq!(
        std::fs::read(&trace_path).unwrap(),
        std::fs::read(&trace2_path).unwrap()
    );
}

#[test]
fn ring_trace_uses_display_polygons() {
    let scene_path = tmp("empty2.scene");
    std::fs::write(&scene_path, "scene v1\nworld 0 0 0 512 512 512\n").unwrap();
    let trace_path = tmp("ring.trace");
    let st = Command::new(bin())
        .args([
            "plan", "--robot", "ring", "--radius", "32", "--eps", "8",
            "--start", "64,64,64,0,0,1", "--goal", "448,64,64,0,0,1",
        ])
        .arg("--scene")
        .arg(&scene_path)
        .arg("--trace")
        .arg(&trace_path)
        .arg("--out")
        .arg(tmp("ring.json"))
        .status()
        .unwrap();
    assert_eq!(st.code(), Some(0));
    let trace = std::fs::read_to_string(&trace_path).unwrap();
    let fp_segs = trace
        .lines()
        .skip_while(|l| l.trim() != "# footprints")
        .skip(1)
        .take_while(|l| !l.starts_with('#'))
        .count();
    // Two waypoints, each a 64-gon.
    assert_eq!(fp_segs, 128);
}

#[test]
fn exit_codes_follow_outcomes() {
    // Sealed goal: NO-PATH must exit 1.
    let scene_path = tmp("sealed.scene");
    let mut doc = String::from("scene v1\nworld 0 0 0 128 128 128\n");
    // Six slabs enclosing [48,80]^3 (walls 8 thick, overlapping at edges).
    let boxes = [
        (40.0, 40.0, 40.0, 88.0, 88.0, 48.0),
        (40.0, 40.0, 80.0, 88.0, 88.0, 88.0),
        (40.0, 40.0, 40.0, 48.0, 88.0, 88.0),
        (80.0, 40.0, 40.0, 88.0, 88.0, 88.0),
        (40.0, 40.0, 40.0, 88.0, 48.0, 88.0),
        (40.0, 80.0, 40.0, 88.0, 88.0, 88.0),
    ];
    for (x0, y0, z0, x1, y1, z1) in boxes {
        let v = [
            (x0, y0, z0), (x1, y0, z0), (x1, y1, z0), (x0, y1, z0),
            (x0, y0, z1), (x1, y0, z1), (x1, y1, z1), (x0, y1, z1),
        ];
        doc.push_str("poly\n");
        for (x, y, z) in v {
            doc.push_str(&format!("v {x} {y} {z}\n"));
        }
        for t in [
            [0, 2, 1], [0, 3, 2], [4, 5, 6], [4, 6, 7],
            [0, 1, 5], [0, 5, 4], [1, 2, 6], [1, 6, 5],
            [2, 3, 7], [2, 7, 6], [3, 0, 4], [3, 4, 7],
        ] {
            doc.push_str(&format!("t {} {} {}\n", t[0], t[1], t[2]));
        }
        doc.push_str("end\n");
    }
    std::fs::write(&scene_path, doc).unwrap();
    let st = Command::new(bin())
        .args([
            "plan", "--robot", "rod", "--length", "8", "--eps", "8",
            "--start", "10,10,10,1,0,0", "--goal", "64,64,64,1,0,0",
        ])
        .arg("--scene")
        .arg(&scene_path)
        .arg("--out")
        .arg(tmp("sealed.json"))
        .status()
        .unwrap();
    assert_eq!(st.code(), Some(1));

    // A no-path result carries no trace.
    let st = Command::new(bin())
        .args(["export-trace"])
        .arg("--result")
        .arg(tmp("sealed.json"))
        .arg("--out")
        .arg(tmp("sealed.trace"))
        .status()
        .unwrap();
    assert!(st.code().unwrap() > 2);

    // Tiny budget: exit 2.
    let st = Command::new(bin())
        .args([
            "plan", "--robot", "rod", "--length", "8", "--eps", "1",
            "--start", "10,10,10,1,0,0", "--goal", "64,64,64,1,0,0",
            "--max-boxes", "50",
        ])
        .arg("--scene")
        .arg(&scene_path)
        .arg("--out")
        .arg(tmp("budget.json"))
        .status()
        .unwrap();
    assert_eq!(st.code(), Some(2));

    // Bad input: exit > 2.
    let st = Command::new(bin())
        .args(["plan", "--robot", "worm", "--length", "8", "--eps", "8",
               "--start", "0,0,0,1,0,0", "--goal", "1,1,1,1,0,0"])
        .arg("--scene")
        .arg(&scene_path)
        .status()
        .unwrap();
    assert!(st.code().unwrap() > 2);
}
