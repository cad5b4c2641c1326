use num_traits::Signed;
use pa_core::alignment::{check, solve, AlignmentVerdict};
use pa_core::boxcomplex::{a_position, construct, markov_incidence, Construction, Side};
use pa_core::exactnum::{determinant, is_bi_perron, FieldScalar};
use pa_core::intervalmap::{IntervalMap, PointKind};
use pa_core::invariants::{chain_form, double_cover, homology_action, singularity_data};
use pa_core::oddblock::{
    from_phi, infer_phi, is_aperiodic, is_nonsingular, minimality, reduce, validate_odd_block, Minimality,
};
use proptest::prelude::*;

fn permutation() -> impl Strategy<Value = Vec<usize>> {
    (2usize..=5).prop_flat_map(|n| Just((0..=n).collect::<Vec<_>>()).prop_shuffle())
}

fn interval_map(phi: &[usize]) -> Option<IntervalMap> {
    IntervalMap::from_matrix(&from_phi(phi).ok()?).ok()
}

/// The shared gates ahead of the construction.
fn admissible(phi: &[usize]) -> bool {
    let m = from_phi(phi).unwrap();
    is_nonsingular(m.entries()) && is_aperiodic(m.entries()) && minimality(phi).unwrap() == Minimality::Minimal
}

fn check_interval_map(h: &IntervalMap) -> Result<(), TestCaseError> {
    let n = h.n();
    let lambda = h.lambda_scalar();
    let x = h.points();
    for i in 0..=n {
        prop_assert_eq!(h.eval(&x[i]).unwrap(), x[h.phi()[i]].clone());
    }
    for j in 1..=n {
        let rise = (&x[h.phi()[j]] - &x[h.phi()[j - 1]]).abs();
        prop_assert!((&rise - &(&lambda * &(&x[j] - &x[j - 1]))).is_zero());
    }
    if let Err(w) = h.one_sided_check() {
        let xi = &x[w.index];
        prop_assert!(w.left < *xi && *xi < w.right);
        let level = h.eval(xi).unwrap();
        prop_assert_eq!(h.eval(&w.left).unwrap(), level.clone());
        prop_assert_eq!(h.eval(&w.right).unwrap(), level);
    }
    Ok(())
}

fn check_rules(h: &IntervalMap, eps: i32) -> Result<(), TestCaseError> {
    let Ok(a) = solve(h, eps) else { return Ok(()) };
    let kinds = h.classify();
    for i in 1..h.n() {
        let expected = match kinds[i] {
            PointKind::CriticalMax => -eps,
            PointKind::CriticalMin => eps,
            _ => {
                let next = h.phi()[i];
                prop_assert!(next != 0 && next != h.n());
                eps * h.dir(i + 1) * a.get(next)
            }
        };
        prop_assert_eq!(a.get(i), expected);
    }
    Ok(())
}

fn check_construction(c: &Construction) -> Result<(), TestCaseError> {
    let rc = &c.complex;
    let n = rc.n();
    let inc = markov_incidence(rc);
    for i in 1..=n {
        for j in 1..=n {
            prop_assert_eq!(inc[j - 1][i - 1], rc.entry(j, i) == 1);
        }
    }
    let zero = FieldScalar::zero(c.h.field());
    let (mut before, mut after) = (zero.clone(), zero);
    for r in rc.rows() {
        let (x0, y0) = rc.map_point(r.index, &r.left, &r.top);
        let (x1, y1) = rc.map_point(r.index, &r.right(), &r.bottom);
        before = &before + &(&r.width * &(&r.bottom - &r.top));
        after = &after + &(&(&x1 - &x0) * &(&y1 - &y0)).abs();
    }
    prop_assert_eq!(before, after);

    let q = &c.quotient;
    prop_assert_eq!(q.euler_characteristic, 2);
    prop_assert_eq!(q.angle_defect, 8);
    for fold in q.dynamics.folds() {
        // Noncritical a_i are glued only through later iterates.
        if !fold.critical {
            prop_assert!(fold.direct_extent.is_zero());
            continue;
        }
        prop_assert!(fold.direct_extent.is_positive());
        prop_assert!(fold.direct_extent <= fold.radius);
        // Vertical segments at a_i run to the neighbouring marked points on S.
        let two = FieldScalar::from_int(c.h.field(), 2);
        let gaps = (0..=n).filter(|&j| j != fold.index).map(|j| {
            let d = &a_position(rc, j) - &fold.center;
            let d = if d.is_negative() { &d + &two } else { d };
            (d.clone(), &two - &d)
        });
        let ahead = gaps.clone().map(|g| g.0).reduce(|a, b| a.min(&b)).unwrap();
        let behind = gaps.map(|g| g.1).reduce(|a, b| a.min(&b)).unwrap();
        prop_assert!(fold.direct_extent <= ahead && fold.direct_extent <= behind, "c_{} exceeds an adjacent edge", fold.index);
    }
    let cover = double_cover(q).unwrap();
    prop_assert_eq!(cover.euler_characteristic, 4 - cover.branch_points.len() as i64);
    prop_assert_eq!(cover.genus, (n / 2) as i64);
    singularity_data(q, &cover).unwrap();
    prop_assert!(is_bi_perron(c.h.lambda()).unwrap());
    if n.is_multiple_of(2) {
        prop_assert_eq!(determinant(from_phi(c.h.phi()).unwrap().entries()).unwrap().abs(), 1.into());
        let hom = homology_action(rc).unwrap();
        prop_assert!(hom.matches_m);
        let eps = i64::from(rc.epsilon());
        let j = chain_form(n);
        let expected: Vec<Vec<i64>> = j.iter().map(|r| r.iter().map(|x| eps * x).collect()).collect();
        prop_assert_eq!(hom.intersection, expected);
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn odd_block_round_trip(phi in permutation()) {
        let m = from_phi(&phi).unwrap();
        prop_assert!(validate_odd_block(m.entries(), &phi).unwrap().valid);
        prop_assert!(infer_phi(m.entries()).unwrap().contains(&phi));
        if let Minimality::Reducible { cycle } = minimality(&phi).unwrap() {
            let r = reduce(&phi).unwrap();
            prop_assert_eq!(r.len(), phi.len() - cycle.len());
            if let Minimality::Reducible { cycle: next } = minimality(&r).unwrap() {
                // Back in the original numbering the new witness is a different cycle.
                let keep: Vec<usize> = (0..phi.len()).filter(|i| !cycle.contains(i)).collect();
                let back: Vec<usize> = next.iter().map(|&k| keep[k]).collect();
                prop_assert!(back.iter().all(|i| !cycle.contains(i)));
                prop_assert!(back.iter().all(|&i| back.contains(&phi[i])));
            }
        }
    }

    #[test]
    fn gates_and_geometry(phi in permutation()) {
        let Some(h) = interval_map(&phi) else { return Ok(()) };
        check_interval_map(&h)?;
        if h.one_sided_check().is_err() {
            return Ok(());
        }
        check_rules(&h, 1)?;
        check_rules(&h, -1)?;
        let verdicts = [check(&h, 1).unwrap(), check(&h, -1).unwrap()];
        let geometric = h.geometric_alignment().unwrap();
        let kinds = h.classify();
        let anchored = geometric
            .domain()
            .iter()
            .any(|&i| matches!(kinds[i], PointKind::CriticalMax | PointKind::CriticalMin));
        let satisfied = verdicts.iter().filter(|v| v.is_satisfied()).count();
        if anchored && !verdicts.iter().any(|v| matches!(v, AlignmentVerdict::NonMinimal { .. })) {
            prop_assert!(satisfied <= 1);
        }
        for (eps, v) in [1, -1].into_iter().zip(&verdicts) {
            if v.is_satisfied() && admissible(&phi) {
                let c = construct(&from_phi(&phi).unwrap(), eps).unwrap();
                check_construction(&c)?;
            }
        }
    }

    #[test]
    fn sides_flip(left in any::<bool>()) {
        let s = if left { Side::Left } else { Side::Right };
        prop_assert_eq!(s.flip().flip(), s);
        prop_assert_ne!(s.flip(), s);
    }
}

/// Every φ with values in 0..=n that is not a permutation yields a
/// degenerate matrix.
#[test]
fn non_permutations_are_degenerate() {
    for n in 1..=5usize {
        let total = (n + 1).pow(n as u32 + 1);
        for code in 0..total {
            let mut phi = Vec::with_capacity(n + 1);
            let mut c = code;
            for _ in 0..=n {
                phi.push(c % (n + 1));
                c /= n + 1;
            }
            let mut seen = vec![false; n + 1];
            if phi.iter().all(|&v| !std::mem::replace(&mut seen[v], true)) {
                continue;
            }
            let Ok(m) = from_phi(&phi) else { continue };
            let e = m.entries();
            let repeated = (0..n).any(|i| (i + 1..n).any(|j| e[i] == e[j]));
            assert!(repeated || determinant(e).unwrap() == 0.into(), "{phi:?}");
        }
    }
}

#[test]
fn one_sided_violation_at_n4() {
    let h = interval_map(&[1, 3, 2, 4, 0]).unwrap();
    let w = h.one_sided_check().unwrap_err();
    assert_eq!(w.index, 2);
    assert_eq!(w.left.decimal(9), "0.050252532");
    assert_eq!(w.right.decimal(9), "0.878679656");
    assert_eq!(h.lambda().decimal(12), "2.414213562373");
}
