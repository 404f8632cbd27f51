use std::path::PathBuf;

use mpld::cost::Cost;
use mpld::geom::Layout;
use mpld::graph::build_layout_graph;
use mpld::io::{read_gds, read_layout_json};
use mpld::pipeline::{run, run_layout, RunConfig};
use mpld::simplify::SimplifyLevel;
use mpld::solvers::{oracle_solve, Algorithm, ColoringInstance};
use mpld::stitch::CandidatePolicy;
use mpld::synth::{random_layout, LayoutParams};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn four_clique() -> Layout {
    read_layout_json(&std::fs::read_to_string(data("four_clique.json")).unwrap()).unwrap()
}

const EXACT: [Algorithm; 3] = [Algorithm::Backtrack, Algorithm::Ilp, Algorithm::DancingLinks];

#[test]
fn four_clique_layout_graph() {
    let l = four_clique();
    assert_eq!(l.len(), 4);
    let g = build_layout_graph(&l, 1);
    assert_eq!(g.conflict_edges, vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
}

#[test]
fn four_clique_costs_per_engine() {
    let l = four_clique();
    for algorithm in EXACT {
        for policy in [None, Some(CandidatePolicy::All), Some(CandidatePolicy::OnePerFeature)] {
            let c = RunConfig {
                algorithm,
                policy,
                ..RunConfig::default()
            };
            let r = run_layout(&l, &c).unwrap().report;
            assert_eq!((r.cost, r.conflict_count, r.stitch_count), (0.1, 0, 1), "{algorithm} {policy:?}");
            let off = RunConfig { stitch: false, ..c };
            assert_eq!(run_layout(&l, &off).unwrap().report.cost, 1.0, "{algorithm}");
        }
    }
}

#[test]
fn stitch_free_exact_runs_match_oracle() {
    for seed in 0..20 {
        let l = random_layout(seed, &LayoutParams::with_features(10));
        let lg = build_layout_graph(&l, 1).to_graph();
        let oracle = oracle_solve(&ColoringInstance::new(&lg, 3, 0.1).unwrap()).unwrap();
        for algorithm in EXACT {
            for level in 0..=4 {
                let c = RunConfig {
                    algorithm,
                    stitch: false,
                    simplify_level: SimplifyLevel::new(level).unwrap(),
                    threads: 2,
                    ..RunConfig::default()
                };
                let r = run_layout(&l, &c).unwrap().report;
                assert_eq!(r.cost, oracle.cost, "seed {seed} {algorithm} level {level}");
            }
        }
    }
}

/// Without hiding, the stitch-free coloring lifted onto segments is a feasible
/// point of the stitched problem, so the exact optimum cannot exceed it.
#[test]
fn stitched_optimum_bounded_by_lifted_coloring() {
    let level = SimplifyLevel::ICC;
    for seed in 0..20 {
        let l = random_layout(seed, &LayoutParams::with_features(25));
        let on = run_layout(&l, &RunConfig { simplify_level: level, ..RunConfig::default() }).unwrap();
        let off = run_layout(&l, &RunConfig { stitch: false, simplify_level: level, ..RunConfig::default() }).unwrap();
        let lifted: Vec<_> = on.decomposed.seg_owner.iter().map(|&f| off.colors[f]).collect();
        let bound = Cost::of(&on.decomposed.graph, &lifted, 0.1).cost;
        assert!(on.report.cost <= bound + 1e-9, "seed {seed}: {} > {bound}", on.report.cost);
    }
}

#[test]
fn outputs_are_written() {
    let dir = tempfile::tempdir().unwrap();
    let c = RunConfig {
        input: Some(data("four_clique.json")),
        algorithm: Algorithm::DancingLinks,
        out_gds: Some(dir.path().join("out.gds")),
        out_svg: Some(dir.path().join("out.svg")),
        report: Some(dir.path().join("report.json")),
        ..RunConfig::default()
    };
    let r = run(&c).unwrap();
    assert_eq!(r.cost, 0.1);
    let gds = std::fs::read(dir.path().join("out.gds")).unwrap();
    let per_mask: usize = (100..103).map(|layer| read_gds(&gds, layer).unwrap().len()).sum();
    // the split feature's segments land on two masks; the rest stay whole
    assert_eq!(per_mask, 5);
    let svg = std::fs::read_to_string(dir.path().join("out.svg")).unwrap();
    assert_eq!(svg.matches("<path").count(), r.segments);
    assert_eq!(svg.matches("stroke-dasharray").count(), r.segments - r.features);
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(report["cost"], 0.1);
    assert_eq!(report["algorithm"], "DL");
}

#[test]
fn gds_input_matches_json_input() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("four_clique.gds");
    std::fs::write(&path, mpld::io::write_layout_gds(&four_clique()).unwrap()).unwrap();
    let c = RunConfig {
        input: Some(path),
        layer: Some(1),
        ..RunConfig::default()
    };
    assert_eq!(run(&c).unwrap().cost, 0.1);
}

#[test]
fn sdp_is_valid_and_bounded() {
    for seed in 0..10 {
        let l = random_layout(seed, &LayoutParams::with_features(40));
        // stitch-free, so the exact run is the true optimum
        let base = RunConfig { stitch: false, ..RunConfig::default() };
        let exact = run_layout(&l, &base).unwrap().report;
        let sdp = run_layout(&l, &RunConfig { algorithm: Algorithm::Sdp, ..base }).unwrap();
        assert!(sdp.report.cost >= exact.cost - 1e-9);
        assert_eq!(sdp.colors.len(), sdp.decomposed.m());
        assert!(!sdp.report.optimal);
    }
}
