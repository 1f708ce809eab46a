use revanneal::phase::{path_is_feasible, scan_phase_diagram, PhaseDiagram};
use revanneal::{AnnealPath, LandscapeKind, ModelParams};

const KINDS: [LandscapeKind; 2] = [LandscapeKind::AraZeroT, LandscapeKind::SraThermal];

fn params(p: u32, alpha: f64, x: f64) -> ModelParams {
    ModelParams::new(p, alpha, x).unwrap()
}

#[test]
fn detour_is_feasible_and_lambda_zero_line_crosses_once() {
    let pd = scan_phase_diagram(&params(3, 0.5, 0.2), LandscapeKind::AraZeroT, 201).unwrap();
    let detour = AnnealPath::through(&[(0.0, 0.0), (0.2, 0.7), (0.6, 0.7), (1.0, 0.0)], 3.0).unwrap();
    assert!(path_is_feasible(&pd, &detour).unwrap().feasible);
    let straight = AnnealPath::through(&[(0.0, 0.0), (1.0, 0.0)], 1.0).unwrap();
    let verdict = path_is_feasible(&pd, &straight).unwrap();
    assert!(!verdict.feasible);
    assert_eq!(verdict.crossings.len(), 1, "{:?}", verdict.crossings);
}

#[test]
fn scans_are_deterministic_and_masks_recomputable() {
    for kind in KINDS {
        let a = scan_phase_diagram(&params(3, 0.6, 0.25), kind, 101).unwrap();
        let b = scan_phase_diagram(&params(3, 0.6, 0.25), kind, 101).unwrap();
        let bits = |pd: &PhaseDiagram| pd.m_grid().iter().map(|v| v.to_bits()).collect::<Vec<_>>();
        assert_eq!(bits(&a), bits(&b));
        assert!(a.m_grid().iter().all(|m| (-1.0..=1.0).contains(m)));
        let rebuilt = PhaseDiagram::from_grid(101, a.m_grid().to_vec(), a.threshold()).unwrap();
        assert_eq!(rebuilt.transition_edges(), a.transition_edges());
    }
}

/// Midpoint and size of the jump in m of every transition edge.
fn edges(pd: &PhaseDiagram) -> Vec<(f64, f64, f64)> {
    let k = (pd.resolution() - 1) as f64;
    let ix = |v: f64| (v * k).round() as usize;
    pd.transition_edges()
        .iter()
        .map(|e| {
            let jump = (pd.m(ix(e.s1), ix(e.lambda1)) - pd.m(ix(e.s2), ix(e.lambda2))).abs();
            (0.5 * (e.s1 + e.s2), 0.5 * (e.lambda1 + e.lambda2), jump)
        })
        .collect()
}

const SETS: [(u32, f64, f64); 3] = [(3, 0.5, 0.2), (5, 0.9, 0.2), (3, 0.6, 0.25)];

/// Coarse edges with no fine edge within one coarse cell.
fn lost_edges(p: u32, alpha: f64, x: f64, kind: LandscapeKind, r: usize) -> (PhaseDiagram, PhaseDiagram, Vec<(f64, f64, f64)>) {
    let cell = 1.0 / (r - 1) as f64;
    let coarse = scan_phase_diagram(&params(p, alpha, x), kind, r).unwrap();
    let fine = scan_phase_diagram(&params(p, alpha, x), kind, 2 * r - 1).unwrap();
    let fine_edges = edges(&fine);
    let lost = edges(&coarse)
        .into_iter()
        .filter(|c| !fine_edges.iter().any(|f| (f.0 - c.0).abs() <= cell + 1e-12 && (f.1 - c.1).abs() <= cell + 1e-12))
        .collect();
    (coarse, fine, lost)
}

#[test]
fn transitions_persist_under_refinement() {
    let mut report = Vec::new();
    for (p, alpha, x) in SETS {
        for kind in KINDS {
            let (_, _, lost) = lost_edges(p, alpha, x, kind, 51);
            if !lost.is_empty() {
                let largest = lost.iter().map(|l| l.2).fold(0.0, f64::max);
                report.push(format!("p={p} alpha={alpha} {}: {} edges vanish, largest jump {largest:.3}", kind.label(), lost.len()));
            }
        }
    }
    assert!(report.is_empty(), "{}", report.join("; "));
}

#[test]
fn jumps_above_twice_the_threshold_persist_under_refinement() {
    let r = 51;
    for (p, alpha, x) in SETS {
        for kind in KINDS {
            let (coarse, fine, lost) = lost_edges(p, alpha, x, kind, r);
            // Shared nodes agree up to the descent tolerance; hot starts differ between grids.
            for i in 0..r {
                for j in 0..r {
                    let (a, b) = (coarse.m(i, j), fine.m(2 * i, 2 * j));
                    assert!((a - b).abs() < 1e-6, "node ({i}, {j}) p={p} {}: {a} vs {b}", kind.label());
                }
            }
            let strong: Vec<_> = lost.iter().filter(|l| l.2 > 2.0 * coarse.threshold()).collect();
            assert!(strong.is_empty(), "p={p} alpha={alpha} {}: {strong:?}", kind.label());
        }
    }
}

#[test]
fn all_up_column_has_no_transitions() {
    for kind in KINDS {
        let pd = scan_phase_diagram(&params(5, 0.9, 0.2), kind, 11).unwrap();
        for j in 0..11 {
            assert!((pd.m(10, j) - 1.0).abs() < 1e-9);
            if j < 10 {
                assert!(!pd.vertical_transition(10, j));
            }
        }
    }
}
