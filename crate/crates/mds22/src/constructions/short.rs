//! Short-length constructions: balanced selections from the orbit
//! template classes.
//!
//! Bandwidth: the four template classes are thinned to sizes g_1..g_4
//! summing to n with max g_i = ceil(n/4); each retained node in class z
//! keeps W_z as its repair subspace, for a worst-case bandwidth of
//! n - 2 + ceil(n/4) = ceil((5n-8)/4).
//!
//! I/O: three classes thinned to max g_i = ceil(n/3), giving worst-case
//! I/O n - 2 + ceil(n/3) = ceil((4n-6)/3), with the designated column
//! tags making every helper read exactly one subsymbol per hit.

use crate::code::ArrayCode;
use crate::constructions::orbit::OrbitContext;
use crate::constructions::{BuiltCode, ConstructError};
use crate::formulas;

/// Endpoint label sets S_1..S_4 for the bandwidth family, together with
/// the class capacities.
fn bw_label_sets(q: u32) -> [Vec<i64>; 4] {
    let r = (q / 3) as i64;
    let eps = (q % 3) as i64;
    let a0 = r + eps.min(1);
    let a1 = r + (eps - 1).max(0);
    let s12: Vec<i64> = (0..a0).map(|a| 3 * a).collect();
    let s3: Vec<i64> = (0..a1).map(|a| 3 * a + 1).collect();
    let s4: Vec<i64> = (0..a1).map(|a| 3 * a + 2).collect();
    [s12.clone(), s12, s3, s4]
}

/// Balanced class sizes g with sum n, max g = ceil(n/4), g_i <= capacity.
fn bw_class_sizes(q: u32, n: u32) -> [usize; 4] {
    let r = (q / 3) as usize;
    let sets = bw_label_sets(q);
    let caps: Vec<usize> = sets.iter().map(|s| s.len()).collect();
    let a = (n / 4) as usize;
    let b = (n % 4) as usize;
    let mut g = [0usize; 4];
    if a < r {
        for (i, gi) in g.iter_mut().enumerate() {
            *gi = if i < b { a + 1 } else { a };
        }
    } else if a == r {
        // hand the +1 to the first b enlarged classes
        let mut extra = b;
        for (i, gi) in g.iter_mut().enumerate() {
            if extra > 0 && caps[i] == r + 1 {
                *gi = r + 1;
                extra -= 1;
            } else {
                *gi = r;
            }
        }
        assert_eq!(extra, 0, "n <= N_bw(q) guarantees enough enlarged classes");
    } else {
        // only possible at the endpoint of q = 2 mod 3
        assert_eq!(b, 0);
        g = [a; 4];
    }
    for i in 0..4 {
        assert!(g[i] <= caps[i]);
    }
    g
}

/// An (n, n-2, 2) MDS array code over GF(q) with worst-case repair
/// bandwidth ceil((5n-8)/4), for 3 <= n <= N_bw(q).
pub fn construct_short_bw(q: u32, n: u32) -> Result<BuiltCode, ConstructError> {
    formulas::bounds(q, n)?;
    if n > formulas::n_bw(q) {
        return Err(ConstructError::OutOfRange { q, n });
    }
    let oc = OrbitContext::new(q)?;
    let sets = bw_label_sets(q);
    let g = bw_class_sizes(q, n);
    let mut blocks = Vec::with_capacity(n as usize);
    let mut kernels = Vec::with_capacity(n as usize);
    for z in 1..=4 {
        let w = oc.bw_repair_space(z);
        for &t in sets[z - 1].iter().take(g[z - 1]) {
            blocks.push(oc.bw_block(z, t));
            kernels.push(w.clone());
        }
    }
    let code = ArrayCode::new(oc.base.clone(), blocks)?;
    Ok(BuiltCode { code, tags: None, repair_kernels: Some(kernels), repair_matrices: None })
}

/// Endpoint label sets S_1..S_3 for the I/O family.
fn io_label_sets(q: u32) -> [Vec<i64>; 3] {
    if q % 2 == 1 {
        let m = q.div_ceil(2) as i64;
        let odds: Vec<i64> = (0..m).map(|a| 2 * a + 1).collect();
        let evens: Vec<i64> = (0..m).map(|a| 2 * a).collect();
        [odds.clone(), evens, odds]
    } else {
        let m = (q / 2) as i64;
        // q+1 = 2m+1 labels; S_2 = {0} u odd, S_3 = non-zero even,
        // S_1 = the complement of S_2
        let s2: Vec<i64> = std::iter::once(0).chain((1..m).map(|a| 2 * a + 1)).collect();
        let s3: Vec<i64> = (1..=m).map(|a| 2 * a).collect();
        let s1: Vec<i64> = (0..=2 * m).filter(|t| !s2.contains(t)).collect();
        [s1, s2, s3]
    }
}

fn io_class_sizes(q: u32, n: u32) -> [usize; 3] {
    let sets = io_label_sets(q);
    let caps: Vec<usize> = sets.iter().map(|s| s.len()).collect();
    let a = (n / 3) as usize;
    let b = (n % 3) as usize;
    let mut g = [0usize; 3];
    if q.is_multiple_of(2) && n == formulas::n_io(q) {
        // the even-q endpoint uses the enlarged first class
        g.copy_from_slice(&caps);
        return g;
    }
    for (i, gi) in g.iter_mut().enumerate() {
        *gi = if i < b { a + 1 } else { a };
    }
    for i in 0..3 {
        assert!(g[i] <= caps[i]);
    }
    g
}

/// An (n, n-2, 2) MDS array code over GF(q) with worst-case repair I/O
/// ceil((4n-6)/3), for 3 <= n <= N_io(q), with its designated column tags.
pub fn construct_short_io(q: u32, n: u32) -> Result<BuiltCode, ConstructError> {
    formulas::bounds(q, n)?;
    if n > formulas::n_io(q) {
        return Err(ConstructError::OutOfRange { q, n });
    }
    let oc = OrbitContext::new(q)?;
    let sets = io_label_sets(q);
    let g = io_class_sizes(q, n);
    let mut blocks = Vec::with_capacity(n as usize);
    let mut kernels = Vec::with_capacity(n as usize);
    for z in 1..=3 {
        let w = oc.io_repair_space(z);
        for &t in sets[z - 1].iter().take(g[z - 1]) {
            blocks.push(oc.io_block(z, t));
            kernels.push(w.clone());
        }
    }
    let code = ArrayCode::new(oc.base.clone(), blocks)?;
    let tags = Some(code.column_tags());
    Ok(BuiltCode { code, tags, repair_kernels: Some(kernels), repair_matrices: None })
}
