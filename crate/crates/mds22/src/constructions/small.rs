//! Explicit small-length codes: the bandwidth-optimal n = 5, 6 families,
//! the I/O-optimal n = 4 codes for both field parities, and the GF(2)
//! length-5 spread code.

use std::sync::Arc;

use crate::code::ArrayCode;
use crate::constructions::{BuiltCode, ConstructError};
use crate::gf::FieldCtx;
use crate::linalg::Mat;

fn block(f: &Arc<FieldCtx>, rows: &[i64; 8]) -> Mat {
    Mat::from_ints(f.clone(), 4, 2, rows)
}

fn rmat(f: &Arc<FieldCtx>, rows: &[i64; 8]) -> Mat {
    Mat::from_ints(f.clone(), 2, 4, rows)
}

/// A (6, 4, 2) MDS array code with worst-case repair bandwidth 5, for
/// q = 4 or q >= 7, together with the repair matrices that realize it.
pub fn construct_n6(q: u32) -> Result<BuiltCode, ConstructError> {
    if q == 4 {
        return construct_n6_gf4();
    }
    if q < 7 {
        return Err(ConstructError::UnsupportedQ(q));
    }
    let f = Arc::new(FieldCtx::of_order(q)?);

    // greedy parameter pick: s, then A avoiding 4 values, then B avoiding 6
    let s = (0..q as u16).find(|&s| s != 0 && s != 1).unwrap();
    let cap_s = f.sub(f.mul(s, s), f.add(s, s)); // s^2 - 2s
    let a = f
        .elements()
        .find(|&a| a != 0 && a != f.neg(1) && a != f.neg(s) && a != cap_s)
        .unwrap();
    let b = f
        .elements()
        .find(|&b| {
            b != 0
                && b != f.neg(1)
                && b != f.neg(s)
                && b != cap_s
                && b != a
                && b != f.div(f.sub(cap_s, a), f.add(a, 1)).unwrap()
        })
        .unwrap();

    // all twelve factors of the admissibility product are non-zero
    let factors = [
        s,
        f.sub(s, 1),
        a,
        b,
        f.sub(a, b),
        f.add(a, 1),
        f.add(b, 1),
        f.add(a, s),
        f.add(b, s),
        f.sub(cap_s, a),
        f.sub(cap_s, b),
        f.sub(cap_s, f.add(f.mul(a, b), f.add(a, b))),
    ];
    assert!(factors.iter().all(|&x| x != 0), "greedy pick must be admissible");

    let delta = f.sub(f.add(f.mul(a, b), f.add(a, b)), cap_s);
    let s1 = f.sub(s, 1);
    let w_of = |b_i: u16, c_i: u16| -> Mat {
        Mat::new(
            f.clone(),
            2,
            2,
            vec![1, b_i, c_i, f.add(1, f.add(b_i, f.mul(b_i, c_i)))],
        )
        .unwrap()
    };
    let pair = |x: u16| -> (u16, u16) {
        // (x, -x(s-1) / (s(x+s)))
        let c = f.neg(f.div(f.mul(x, s1), f.mul(s, f.add(x, s))).unwrap());
        (x, c)
    };
    let (b1, c1) = (0u16, 0u16);
    let (b2, c2) = pair(a);
    let (b3, c3) = pair(b);
    let b4 = f.div(delta, f.mul(s1, s1)).unwrap();
    let c4 = f.neg(f.div(delta, f.mul(f.add(a, s), f.add(b, s))).unwrap());

    let ident = Mat::identity(f.clone(), 2);
    let mut blocks: Vec<Mat> = [(b1, c1), (b2, c2), (b3, c3), (b4, c4)]
        .iter()
        .map(|&(bi, ci)| {
            let w = w_of(bi, ci);
            let mut m = Mat::zero(f.clone(), 4, 2);
            for r in 0..2 {
                for c in 0..2 {
                    m.set(r, c, ident.get(r, c));
                    m.set(r + 2, c, w.get(r, c));
                }
            }
            m
        })
        .collect();
    blocks.push(block(&f, &[1, 0, 0, 1, 0, 0, 0, 0]));
    blocks.push(block(&f, &[0, 0, 0, 0, 1, 0, 0, 1]));

    // repair matrices M(u, v) = [[1, -u, 0, 0], [0, 0, v, -1]]
    let m_of = |u: u16, v: u16| -> Mat {
        Mat::new(f.clone(), 2, 4, vec![1, f.neg(u), 0, 0, 0, 0, v, f.neg(1)]).unwrap()
    };
    let u1 = f.div(f.add(f.mul(a, b), f.add(f.add(a, b), s)), s1).unwrap();
    let v1 = f
        .div(
            f.mul(s1, f.sub(f.mul(s, s), f.mul(a, b))),
            f.mul(s, f.mul(f.add(a, s), f.add(b, s))),
        )
        .unwrap();
    let u2 = f.div(f.add(b, s), s1).unwrap();
    let v2 = f.div(s1, f.add(b, s)).unwrap();
    let u3 = f.div(f.add(a, s), s1).unwrap();
    let v3 = f.div(s1, f.add(a, s)).unwrap();
    let (u4, v4) = (s, f.inv(s).unwrap());
    let matrices = vec![
        m_of(u1, v1),
        m_of(u2, v2),
        m_of(u3, v3),
        m_of(u4, v4),
        rmat(&f, &[0, 1, 0, 0, 1, 0, -1, 0]),
        rmat(&f, &[0, 0, 1, 0, 1, -1, 0, 1]),
    ];

    let code = ArrayCode::new(f, blocks)?;
    Ok(BuiltCode { code, tags: None, repair_kernels: None, repair_matrices: Some(matrices) })
}

/// The explicit (6, 4, 2) code over GF(4) with repair bandwidth 5.
fn construct_n6_gf4() -> Result<BuiltCode, ConstructError> {
    let f = Arc::new(FieldCtx::of_order(4)?);
    let w = 2u16; // the generator, w^2 + w + 1 = 0
    let w1 = 3u16; // w + 1
    let b4 = |e: [u16; 8]| Mat::new(f.clone(), 4, 2, e.to_vec()).unwrap();
    let m4 = |e: [u16; 8]| Mat::new(f.clone(), 2, 4, e.to_vec()).unwrap();
    let blocks = vec![
        b4([0, 1, 1, 0, 1, 0, 0, 1]),
        b4([1, 0, 1, 1, 0, 1, 0, 1]),
        b4([w1, 0, w, 1, 0, 1, 0, w]),
        b4([w, 0, w1, 1, 0, 1, 0, w1]),
        b4([0, 0, 1, 0, 0, 0, 0, 1]),
        b4([1, 0, 0, 0, 0, 1, 0, 0]),
    ];
    let matrices = vec![
        m4([0, 0, 1, 0, 0, 0, 0, 1]),
        m4([1, 0, 1, 0, 0, 1, 0, 1]),
        m4([w1, 0, 1, 0, 0, w, 0, 1]),
        m4([w, 0, 1, 0, 0, w1, 0, 1]),
        m4([0, 1, 0, 0, 1, 0, 0, 1]),
        m4([1, 0, 0, 0, 0, 1, 1, 0]),
    ];
    let code = ArrayCode::new(f, blocks)?;
    Ok(BuiltCode { code, tags: None, repair_kernels: None, repair_matrices: Some(matrices) })
}

/// A (5, 3, 2) MDS array code with worst-case repair bandwidth 4, for
/// q = 3, 4 or q >= 7: the explicit GF(3) code, else the 6-node code
/// with its last node removed.
pub fn construct_n5(q: u32) -> Result<BuiltCode, ConstructError> {
    if q == 3 {
        let f = Arc::new(FieldCtx::of_order(3)?);
        let blocks = vec![
            block(&f, &[0, 0, 0, 0, 1, 0, 0, 1]),
            block(&f, &[1, 0, 0, 1, 0, 0, 0, 0]),
            block(&f, &[1, 0, 0, 1, 0, 1, 1, 0]),
            block(&f, &[1, 0, 0, 1, 0, 2, 2, 1]),
            block(&f, &[1, 0, 0, 1, 1, 1, 0, 2]),
        ];
        let matrices = vec![
            rmat(&f, &[0, 0, 0, 1, 1, 1, 2, 0]),
            rmat(&f, &[0, 1, 0, 1, 1, 0, 0, 2]),
            rmat(&f, &[0, 0, 1, 1, 1, 0, 0, 0]),
            rmat(&f, &[0, 0, 1, 2, 1, 2, 0, 0]),
            rmat(&f, &[0, 0, 1, 0, 0, 1, 0, 0]),
        ];
        let code = ArrayCode::new(f, blocks)?;
        return Ok(BuiltCode { code, tags: None, repair_kernels: None, repair_matrices: Some(matrices) });
    }
    if q != 4 && q < 7 {
        return Err(ConstructError::UnsupportedQ(q));
    }
    let six = construct_n6(q)?;
    let code = six.code.puncture(5)?;
    let mut matrices = six.repair_matrices.unwrap();
    matrices.pop();
    Ok(BuiltCode { code, tags: None, repair_kernels: None, repair_matrices: Some(matrices) })
}

/// A (4, 2, 2) MDS array code with worst-case repair I/O 3, over any
/// prime power (the blocks depend only on the parity of q).
pub fn construct_n4_io(q: u32) -> Result<BuiltCode, ConstructError> {
    let f = Arc::new(FieldCtx::of_order(q)?);
    let (blocks, matrices) = if q % 2 == 1 {
        (
            vec![
                block(&f, &[1, 1, 0, 1, 0, 0, 0, 0]),
                block(&f, &[0, 0, 0, 0, 1, -1, 0, 1]),
                block(&f, &[1, -1, 0, 1, 1, -1, 0, 1]),
                block(&f, &[1, 1, 0, 1, 0, -1, 1, 1]),
            ],
            vec![
                rmat(&f, &[1, 0, -1, -1, 0, 1, 0, 0]),
                rmat(&f, &[0, 1, 1, 0, 0, -1, 0, 1]),
                rmat(&f, &[1, -1, 0, 0, 0, 0, 1, 1]),
                rmat(&f, &[0, 1, 0, 0, 0, 0, 0, 1]),
            ],
        )
    } else {
        (
            vec![
                block(&f, &[1, 1, 1, 0, 0, 0, 0, 0]),
                block(&f, &[0, 0, 0, 0, 1, 1, 0, 1]),
                block(&f, &[0, 1, 1, 1, 0, 1, 1, 1]),
                block(&f, &[1, 1, 1, 0, 0, 1, 1, 1]),
            ],
            vec![
                rmat(&f, &[0, 1, 0, 1, 1, 0, 0, 1]),
                rmat(&f, &[0, 0, 1, 0, 0, 1, 0, 1]),
                rmat(&f, &[0, 0, 1, 1, 0, 1, 0, 0]),
                rmat(&f, &[0, 0, 1, 1, 1, 1, 0, 0]),
            ],
        )
    };
    let code = ArrayCode::new(f, blocks)?;
    Ok(BuiltCode { code, tags: None, repair_kernels: None, repair_matrices: Some(matrices) })
}

/// The five pairwise-skew planes of GF(2)^4 (a full spread), the unique
/// length for q = 2 beyond the short range; attains 2n-q-3 = 5 for both
/// metrics.
///
/// Each plane has exactly three non-zero points and the block exposes two
/// of them as columns. The bandwidth does not care which two, but the
/// I/O optimum needs the five choices coordinated (a repair kernel must
/// consist entirely of exposed points of three distinct helpers), so the
/// 3^5 assignments are scanned for the first one attaining it.
pub fn construct_spread_q2_n5() -> Result<BuiltCode, ConstructError> {
    let f = Arc::new(FieldCtx::of_order(2)?);
    let e = FieldCtx::of_order(4)?;
    let digits = |v: u16| -> [u16; 2] { [v & 1, v >> 1] };
    // the three non-zero points of each spread member, in a fixed order
    let mut points: Vec<[Vec<u16>; 3]> = Vec::with_capacity(5);
    for t in 0..4u16 {
        // the graph {(v, t*v) : v in GF(4)} in GF(2)-coordinates
        let pts: Vec<Vec<u16>> = [1u16, 2, 3]
            .iter()
            .map(|&v| {
                let tv = digits(e.mul(t, v));
                let vd = digits(v);
                vec![vd[0], vd[1], tv[0], tv[1]]
            })
            .collect();
        points.push(pts.try_into().unwrap());
    }
    points.push([vec![0, 0, 1, 0], vec![0, 0, 0, 1], vec![0, 0, 1, 1]]);

    let spaces = crate::repair::enumerate_subspaces(&f);
    let mut exclude = [0usize; 5];
    loop {
        let blocks: Vec<Mat> = points
            .iter()
            .zip(exclude)
            .map(|(pts, skip)| {
                let cols: Vec<Vec<u16>> = (0..3).filter(|&k| k != skip).map(|k| pts[k].clone()).collect();
                Mat::from_cols(f.clone(), &cols)
            })
            .collect();
        let code = ArrayCode::new(f.clone(), blocks)?;
        // every node must have a kernel reading one subsymbol per helper
        let optimal = (0..5).all(|i| {
            spaces.iter().any(|w| {
                w.meet_dim(&f, code.block(i)) == 0
                    && (0..5)
                        .filter(|&j| j != i)
                        .map(|j| w.columns_inside(&f, code.block(j)))
                        .sum::<usize>()
                        == 3
            })
        });
        if optimal {
            let tags = Some(code.column_tags());
            return Ok(BuiltCode { code, tags, repair_kernels: None, repair_matrices: None });
        }
        // next assignment
        let mut k = 4;
        loop {
            exclude[k] += 1;
            if exclude[k] < 3 {
                break;
            }
            exclude[k] = 0;
            if k == 0 {
                return Err(ConstructError::WitnessNotFound(2));
            }
            k -= 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn designated_bandwidths(built: &BuiltCode) -> Vec<u32> {
        let code = &built.code;
        let ms = built.repair_matrices.as_ref().unwrap();
        (0..code.n())
            .map(|i| {
                let m = &ms[i];
                assert!(m.mul(code.block(i)).unwrap().is_invertible(), "node {i}");
                (0..code.n())
                    .filter(|&j| j != i)
                    .map(|j| m.mul(code.block(j)).unwrap().rank() as u32)
                    .sum()
            })
            .collect()
    }

    #[test]
    fn n6_codes() {
        for q in [4u32, 7, 8, 9, 11, 13, 25, 27] {
            let built = construct_n6(q).unwrap();
            assert!(built.code.is_mds(), "q={q}");
            assert_eq!(built.code.n(), 6);
            let bws = designated_bandwidths(&built);
            assert!(bws.iter().all(|&b| b == 5), "q={q}: {bws:?}");
        }
        assert!(matches!(construct_n6(3), Err(ConstructError::UnsupportedQ(3))));
        assert!(matches!(construct_n6(5), Err(ConstructError::UnsupportedQ(5))));
    }

    #[test]
    fn n5_codes() {
        for q in [3u32, 4, 7, 8, 9, 11] {
            let built = construct_n5(q).unwrap();
            assert!(built.code.is_mds(), "q={q}");
            assert_eq!(built.code.n(), 5);
            let bws = designated_bandwidths(&built);
            assert!(bws.iter().all(|&b| b == 4), "q={q}: {bws:?}");
        }
        assert!(matches!(construct_n5(5), Err(ConstructError::UnsupportedQ(5))));
    }

    #[test]
    fn n4_io_codes() {
        for q in [2u32, 3, 4, 5, 7, 8, 9, 11, 13] {
            let built = construct_n4_io(q).unwrap();
            assert!(built.code.is_mds(), "q={q}");
            let code = &built.code;
            let ms = built.repair_matrices.as_ref().unwrap();
            for (i, m) in ms.iter().enumerate() {
                assert!(m.mul(code.block(i)).unwrap().is_invertible());
                for j in 0..4 {
                    if j != i {
                        let prod = m.mul(code.block(j)).unwrap();
                        assert_eq!(prod.nz_columns(), 1, "q={q} i={i} j={j}");
                    }
                }
            }
        }
    }

    #[test]
    fn n4_io_determinant_pattern() {
        // odd blocks have pairwise determinants 1 or 2; even blocks 1
        let odd = construct_n4_io(7).unwrap().code;
        for i in 0..4 {
            for j in i + 1..4 {
                let d = odd.block(i).hstack(odd.block(j)).unwrap().det().unwrap();
                assert!(d == 1 || d == 2, "odd det {d}");
            }
        }
        let even = construct_n4_io(4).unwrap().code;
        for i in 0..4 {
            for j in i + 1..4 {
                let d = even.block(i).hstack(even.block(j)).unwrap().det().unwrap();
                assert_eq!(d, 1);
            }
        }
    }

    #[test]
    fn spread_is_mds() {
        let built = construct_spread_q2_n5().unwrap();
        assert_eq!(built.code.n(), 5);
        assert!(built.code.is_mds());
    }
}
