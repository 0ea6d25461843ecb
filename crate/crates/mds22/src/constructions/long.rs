//! Long-length constructions attaining the q-dependent optimum 2n-q-3:
//! endpoint skeletons of template subspaces whose designated repair
//! subspaces each hit exactly q+1 helpers, extended with graph subspaces
//! that are skew to everything already placed.

use crate::code::ArrayCode;
use crate::constructions::cyclic::CyclicT;
use crate::constructions::orbit::meet_dim;
use crate::constructions::{BuiltCode, ConstructError};
use crate::formulas;
use crate::linalg::Mat;

/// One node of a skeleton: its block and the designated repair subspace.
struct Node {
    block: Mat,
    kernel: Mat,
}

/// The bandwidth endpoint skeleton over GF(q): pairwise skew subspaces,
/// |skeleton| = ceil(4(q+1)/3), every designated repair subspace hitting
/// exactly q+1 of the others.
fn bw_skeleton(ct: &CyclicT) -> Vec<Node> {
    let q = ct.q() as i64;
    let period = q + 1;
    let m = period / 3;
    let s = period % 3;
    let mut nodes = Vec::new();
    let mut push = |block: Mat, z: usize| {
        nodes.push(Node { block, kernel: ct.repair_space(z) });
    };
    match s {
        0 => {
            let class = |i: i64| (0..m).map(move |a| i + 3 * a);
            for a in class(1) {
                push(ct.l3(a + 1, a), 1);
            }
            for b in class(2) {
                push(ct.l2(b + 2, b), 2);
            }
            for a in class(1) {
                push(ct.l1(a + 1, a), 3);
            }
            for c in class(0) {
                push(ct.l1(c, c), 4);
            }
        }
        1 => {
            let s_set: Vec<i64> = (0..m).map(|a| 1 + 3 * a).chain([3 * m]).collect();
            let c_set: Vec<i64> = (0..m - 1).map(|a| 3 + 3 * a).collect();
            let d_set: Vec<i64> = (0..m - 1).map(|a| 2 + 3 * a).collect();
            for &a in &s_set {
                push(ct.l3(a + 1, a), 1);
            }
            for &d in &d_set {
                push(ct.l2(d + 2, d), 2);
            }
            for &a in &s_set {
                push(ct.l1(a + 1, a), 3);
            }
            for &c in &c_set {
                push(ct.l1(c, c), 4);
            }
            push(ct.l2(1, 0), 2);
            push(ct.l2(3 * m, 3 * m - 1), 2);
        }
        _ => {
            let s_set: Vec<i64> = (0..m).map(|a| 1 + 3 * a).chain([3 * m]).collect();
            let c_set: Vec<i64> = (0..m).map(|a| 3 * a).collect();
            let d_set: Vec<i64> = (0..m - 1).map(|a| 2 + 3 * a).chain([3 * m + 1]).collect();
            for &a in &s_set {
                push(ct.l3(a + 1, a), 1);
            }
            for &d in &d_set {
                push(ct.l2(d + 2, d), 2);
            }
            for &a in &s_set {
                push(ct.l1(a + 1, a), 3);
            }
            for &c in &c_set {
                push(ct.l1(c, c), 4);
            }
            push(ct.l2(3 * m, 3 * m - 1), 2);
        }
    }
    debug_assert_eq!(nodes.len() as u32, formulas::n_bw_tilde(ct.q()));
    nodes
}

fn is_skew_to_all(candidate: &Mat, nodes: &[Node], repairs: &[Mat]) -> bool {
    nodes.iter().all(|n| meet_dim(candidate, &n.block) == 0)
        && repairs.iter().all(|w| meet_dim(candidate, w) == 0)
}

fn finish(ct: &CyclicT, nodes: Vec<Node>, with_tags: bool) -> Result<BuiltCode, ConstructError> {
    let blocks: Vec<Mat> = nodes.iter().map(|n| n.block.clone()).collect();
    let kernels: Vec<Mat> = nodes.iter().map(|n| n.kernel.clone()).collect();
    let code = ArrayCode::new(ct.base.clone(), blocks)?;
    let tags = with_tags.then(|| code.column_tags());
    Ok(BuiltCode { code, tags, repair_kernels: Some(kernels), repair_matrices: None })
}

/// An (n, n-2, 2) MDS array code over GF(q) with worst-case repair
/// bandwidth 2n-q-3, for ceil(4(q+1)/3) <= n <= 2q+2 (endpoint only when
/// q < 5).
pub fn construct_long_bw(q: u32, n: u32) -> Result<BuiltCode, ConstructError> {
    formulas::bounds(q, n)?;
    if n < formulas::n_bw_tilde(q) || n > 2 * q + 2 {
        return Err(ConstructError::OutOfRange { q, n });
    }
    if q < 5 && n > formulas::n_bw_tilde(q) {
        return Err(ConstructError::ExtensionUnavailable(q));
    }
    let ct = CyclicT::new(q)?;
    let mut nodes = bw_skeleton(&ct);
    let repairs: Vec<Mat> = (1..=4).map(|z| ct.repair_space(z)).collect();
    let w1 = ct.repair_space(1);

    // extend with graphs of lambda * T^d, d in {2, 3}, scanned in
    // (d, lambda) order, keeping only pairs skew to everything placed
    let t2 = ct.t_mat.mul(&ct.t_mat).unwrap();
    let t3 = t2.mul(&ct.t_mat).unwrap();
    'grow: for d in [&t2, &t3] {
        for lambda in 1..q as u16 {
            if nodes.len() as u32 == n {
                break 'grow;
            }
            let candidate = ct.graph(&d.scale(lambda));
            if is_skew_to_all(&candidate, &nodes, &repairs) {
                nodes.push(Node { block: candidate, kernel: w1.clone() });
            }
        }
    }
    if nodes.len() as u32 != n {
        return Err(ConstructError::OutOfRange { q, n });
    }
    finish(&ct, nodes, false)
}

/// The in-between bandwidth length n = 4q/3 + 1 for q = 0 mod 3: the long
/// endpoint with its last node deleted, which meets ceil((5n-8)/4).
pub fn construct_gap_mod0(q: u32) -> Result<BuiltCode, ConstructError> {
    if !q.is_multiple_of(3) {
        return Err(ConstructError::WrongResidue(q));
    }
    let endpoint = construct_long_bw(q, formulas::n_bw_tilde(q))?;
    let n = endpoint.code.n();
    let code = endpoint.code.puncture(n - 1)?;
    let mut kernels = endpoint.repair_kernels.unwrap();
    kernels.pop();
    Ok(BuiltCode { code, tags: None, repair_kernels: Some(kernels), repair_matrices: None })
}

/// The I/O endpoint skeleton, with blocks whose columns are exactly the
/// designated projective column points.
fn io_skeleton(ct: &CyclicT) -> Result<Vec<Node>, ConstructError> {
    let q = ct.q() as i64;
    let f = &ct.base;
    let mut nodes = Vec::new();
    if q % 2 == 1 {
        // split P^1 into even and odd labels; all three families pair a
        // label with its successor
        let evens: Vec<i64> = (0..=q).filter(|t| t % 2 == 0).collect();
        let odds: Vec<i64> = (0..=q).filter(|t| t % 2 == 1).collect();
        for &a in &evens {
            nodes.push(Node { block: ct.l1(a, a + 1), kernel: ct.repair_space(3) });
        }
        for &b in &odds {
            nodes.push(Node { block: ct.l2(b, b + 1), kernel: ct.repair_space(2) });
        }
        for &a in &evens {
            nodes.push(Node { block: ct.l3(a, a + 1), kernel: ct.repair_space(1) });
        }
    } else {
        let t_inv = ct.t_mat.inverse().expect("T is invertible");
        let s_set: Vec<i64> = (0..q / 2).map(|a| 2 * a + 1).collect();
        let c_set: Vec<i64> = (0..=q).filter(|t| !s_set.contains(t)).collect();
        let col = |v: &[u16; 2], w: &[u16; 2]| vec![v[0], v[1], w[0], w[1]];
        let apply = |m: &Mat, v: &[u16; 2]| crate::constructions::orbit::apply2(f, m, v);
        for &a in &s_set {
            // L1(a+1, a) tagged by its points on W_1 and W_4
            let pa = ct.point(a);
            let pa1 = ct.point(a + 1);
            let tpa = apply(&ct.t_mat, &pa);
            let block = Mat::from_cols(ct.base.clone(), &[col(&pa1, &[0, 0]), col(&tpa, &pa)]);
            nodes.push(Node { block, kernel: ct.repair_space(3) });
        }
        for &a in &s_set {
            // L3(a+1, a) tagged by its points on W_3 and W_4
            let pa = ct.point(a);
            let tinv_pa = apply(&t_inv, &pa);
            let block = Mat::from_cols(ct.base.clone(), &[col(&pa, &pa), col(&pa, &tinv_pa)]);
            nodes.push(Node { block, kernel: ct.repair_space(1) });
        }
        for &b in &c_set {
            // L2(b+1, b); its natural columns already lie on W_1 and W_3
            nodes.push(Node { block: ct.l2(b + 1, b), kernel: ct.repair_space(4) });
        }
        // the extra graph node: A_s with trace(c/s^2) = 1, s != c, smallest s
        let qq = ct.q() as u16;
        let s = (1..qq)
            .find(|&s| {
                s != ct.c && {
                    let val = f.div(ct.c, f.mul(s, s)).unwrap();
                    f.abs_trace(val) == 1
                }
            })
            .ok_or(ConstructError::WitnessNotFound(ct.q()))?;
        let a_s = Mat::new(ct.base.clone(), 2, 2, vec![0, s, 1, s]).unwrap();
        nodes.push(Node { block: ct.graph(&a_s), kernel: ct.repair_space(1) });
    }
    debug_assert_eq!(nodes.len() as u32, formulas::n_io_tilde(ct.q()));
    Ok(nodes)
}

/// An (n, n-2, 2) MDS array code over GF(q), q >= 3, attaining 2n-q-3
/// simultaneously for repair bandwidth and repair I/O, with column tags;
/// for n_io_tilde(q) <= n <= 2q+1.
pub fn construct_long_io(q: u32, n: u32) -> Result<BuiltCode, ConstructError> {
    formulas::bounds(q, n)?;
    if q < 3 || n < formulas::n_io_tilde(q) || n > 2 * q + 1 {
        return Err(ConstructError::OutOfRange { q, n });
    }
    let ct = CyclicT::new(q)?;
    let mut nodes = io_skeleton(&ct)?;
    let w1 = ct.repair_space(1);

    if q % 2 == 1 {
        // add graphs of c*I, c != 0, 1, in encoding order
        let repairs = [ct.repair_space(1), ct.repair_space(2), ct.repair_space(3)];
        for c in 2..q as u16 {
            if nodes.len() as u32 == n {
                break;
            }
            let candidate = ct.graph(&Mat::identity(ct.base.clone(), 2).scale(c));
            if is_skew_to_all(&candidate, &nodes, &repairs) {
                nodes.push(Node { block: candidate, kernel: w1.clone() });
            }
        }
    } else {
        // add graphs of u*I + v*T, u not in {0, 1}, scanned in (u, v) order
        let repairs = [ct.repair_space(1), ct.repair_space(3), ct.repair_space(4)];
        'grow: for u in 2..q as u16 {
            for v in 0..q as u16 {
                if nodes.len() as u32 == n {
                    break 'grow;
                }
                let a = Mat::identity(ct.base.clone(), 2)
                    .scale(u)
                    .add(&ct.t_mat.scale(v))
                    .unwrap();
                let candidate = ct.graph(&a);
                if is_skew_to_all(&candidate, &nodes, &repairs) {
                    nodes.push(Node { block: candidate, kernel: w1.clone() });
                }
            }
        }
    }
    if nodes.len() as u32 != n {
        return Err(ConstructError::OutOfRange { q, n });
    }
    finish(&ct, nodes, true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_skeleton(built: &BuiltCode, q: u32) {
        let n = built.code.n();
        assert!(built.code.is_mds());
        let kernels = built.repair_kernels.as_ref().unwrap();
        for (i, w) in kernels.iter().enumerate() {
            assert_eq!(meet_dim(w, built.code.block(i)), 0, "repair not feasible at {i}");
            let hits = (0..n)
                .filter(|&j| j != i && meet_dim(w, built.code.block(j)) > 0)
                .count();
            assert_eq!(hits as u32, q + 1, "node {i} repair hits");
        }
    }

    #[test]
    fn bw_endpoints_hit_exactly_q_plus_1() {
        for q in [2u32, 3, 4, 5, 7, 8, 9] {
            let n = formulas::n_bw_tilde(q);
            let built = construct_long_bw(q, n).unwrap();
            assert_eq!(built.code.n() as u32, n, "q={q}");
            check_skeleton(&built, q);
        }
    }

    #[test]
    fn bw_extensions_reach_2q_plus_2() {
        for q in [5u32, 7, 8, 9] {
            for n in formulas::n_bw_tilde(q)..=2 * q + 2 {
                let built = construct_long_bw(q, n).unwrap();
                assert_eq!(built.code.n() as u32, n, "q={q} n={n}");
                check_skeleton(&built, q);
            }
        }
        assert!(matches!(
            construct_long_bw(4, 8),
            Err(ConstructError::ExtensionUnavailable(4))
        ));
        assert!(matches!(
            construct_long_bw(3, 8),
            Err(ConstructError::ExtensionUnavailable(3))
        ));
    }

    #[test]
    fn io_endpoints_and_extensions() {
        for q in [3u32, 4, 5, 7, 8, 9] {
            for n in formulas::n_io_tilde(q)..=2 * q + 1 {
                let built = construct_long_io(q, n).unwrap();
                assert_eq!(built.code.n() as u32, n, "q={q} n={n}");
                check_skeleton(&built, q);
                // every repair subspace contains exactly one designated
                // column point of each helper it hits
                let kernels = built.repair_kernels.as_ref().unwrap();
                for (i, w) in kernels.iter().enumerate() {
                    for j in 0..built.code.n() {
                        if j == i {
                            continue;
                        }
                        let b = built.code.block(j);
                        let inside = (0..2).filter(|&c| w.span_contains(&b.col(c))).count();
                        if meet_dim(w, b) > 0 {
                            assert_eq!(inside, 1, "q={q} n={n} node {i} helper {j}");
                        } else {
                            assert_eq!(inside, 0);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn gap_construction() {
        for q in [3u32, 9] {
            let built = construct_gap_mod0(q).unwrap();
            let n = 4 * q / 3 + 1;
            assert_eq!(built.code.n() as u32, n);
            assert!(built.code.is_mds());
            // every designated repair still hits at least q helpers
            let kernels = built.repair_kernels.as_ref().unwrap();
            let mut worst = 0usize;
            for (i, w) in kernels.iter().enumerate() {
                assert_eq!(meet_dim(w, built.code.block(i)), 0);
                let gained: usize = (0..built.code.n())
                    .filter(|&j| j != i)
                    .map(|j| meet_dim(w, built.code.block(j)))
                    .sum();
                worst = worst.max(2 * (built.code.n() - 1) - gained);
            }
            assert!(worst as u32 <= formulas::beta_lower_sharp(n), "q={q}: {worst}");
        }
        assert!(matches!(construct_gap_mod0(5), Err(ConstructError::WrongResidue(5))));
    }
}
