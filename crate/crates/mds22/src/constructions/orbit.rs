//! The four-class orbit machinery behind the short-length constructions.
//!
//! E = GF(q^2) is viewed as a 2-dimensional GF(q)-space with basis
//! {1, xi} for xi the canonical primitive element of E. Multiplication by
//! xi is the GF(q)-linear map A with A^2 = sigma*A + tau*I, and the orbit
//! x_t = A^t(1), t in Z/(q+1), walks through all q+1 projective points of
//! P(E). All later computations happen in GF(q)-coordinates, so E itself
//! is only consulted here, to derive sigma and tau through the subfield
//! embedding.

use std::sync::Arc;

use crate::constructions::ConstructError;
use crate::gf::{embedding_table, FieldCtx};
use crate::linalg::{normalize_direction, Mat};

/// Shared state of the orbit constructions over GF(q).
#[derive(Debug, Clone)]
pub struct OrbitContext {
    pub base: Arc<FieldCtx>,
    pub ext: Arc<FieldCtx>,
    /// xi, the canonical primitive element of E (as an E encoding).
    pub xi: u16,
    /// A^2 = sigma*A + tau*I, as GF(q) encodings.
    pub sigma: u16,
    pub tau: u16,
    /// Multiplication by xi in the basis {1, xi}.
    pub mat_a: Mat,
    /// x_t = A^t(1) in GF(q)-coordinates, t = 0..q (length q+1).
    pub orbit: Vec<[u16; 2]>,
}

impl OrbitContext {
    pub fn new(q: u32) -> Result<OrbitContext, ConstructError> {
        let base = Arc::new(FieldCtx::of_order(q)?);
        let ext = Arc::new(FieldCtx::new(base.p(), 2 * base.m(), None)?);
        let embed = embedding_table(&base, &ext)?;
        let unembed = |v: u16| -> u16 {
            embed
                .iter()
                .position(|&e| e == v)
                .expect("element lies in the base subfield") as u16
        };

        let xi = ext.primitive_element();
        let xi_q = ext.pow(xi, q as u64);
        // minimal polynomial of xi over GF(q) is x^2 - sigma*x - tau with
        // sigma = xi + xi^q and tau = -(xi * xi^q)
        let sigma = unembed(ext.add(xi, xi_q));
        let tau = unembed(ext.neg(ext.mul(xi, xi_q)));
        assert!(sigma != 0, "a primitive element cannot have zero trace to GF(q)");
        assert!(tau != 0);

        let mat_a = Mat::new(base.clone(), 2, 2, vec![0, tau, 1, sigma]).unwrap();
        let mut orbit = Vec::with_capacity(q as usize + 1);
        let mut x = [1u16, 0u16];
        for _ in 0..=q {
            orbit.push(x);
            x = apply2(&base, &mat_a, &x);
        }
        // the q+1 orbit points are pairwise distinct projectively
        let dirs: Vec<Vec<u16>> = orbit.iter().map(|v| normalize_direction(&base, v)).collect();
        for i in 0..dirs.len() {
            for j in i + 1..dirs.len() {
                assert_ne!(dirs[i], dirs[j], "orbit points must be distinct");
            }
        }
        Ok(OrbitContext { base, ext, xi, sigma, tau, mat_a, orbit })
    }

    pub fn q(&self) -> u32 {
        self.base.q()
    }

    fn label(&self, t: i64) -> [u16; 2] {
        let n = self.orbit.len() as i64;
        self.orbit[(((t % n) + n) % n) as usize]
    }

    fn a_of(&self, x: &[u16; 2]) -> [u16; 2] {
        apply2(&self.base, &self.mat_a, x)
    }

    fn a_inv_of(&self, x: &[u16; 2]) -> [u16; 2] {
        // A^{-1} = (A - sigma*I) / tau
        let f = &self.base;
        let ax = self.a_of(x);
        let tinv = f.inv(self.tau).unwrap();
        [
            f.mul(f.sub(ax[0], f.mul(self.sigma, x[0])), tinv),
            f.mul(f.sub(ax[1], f.mul(self.sigma, x[1])), tinv),
        ]
    }

    fn neg2(&self, x: &[u16; 2]) -> [u16; 2] {
        [self.base.neg(x[0]), self.base.neg(x[1])]
    }

    /// Bandwidth-family node block H_{z,t} for class z in 1..=4: a 4x2
    /// matrix whose columns span the template subspace at orbit point x_t.
    pub fn bw_block(&self, z: usize, t: i64) -> Mat {
        let x = self.label(t);
        let ax = self.a_of(&x);
        match z {
            1 => self.stack(&x, &[0, 0], &self.neg2(&ax), &ax),
            2 => self.stack(&x, &self.neg2(&x), &[0, 0], &ax),
            3 => {
                let aax = self.a_of(&ax);
                self.stack(&x, &[0, 0], &[0, 0], &aax)
            }
            4 => self.stack(&x, &[0, 0], &[0, 0], &x),
            _ => panic!("class out of range"),
        }
    }

    /// I/O-family node block K_{z,t} for class z in 1..=3; its columns are
    /// exactly the designated projective column points.
    pub fn io_block(&self, z: usize, t: i64) -> Mat {
        let x = self.label(t);
        match z {
            1 => {
                let ainv = self.a_inv_of(&x);
                self.stack(&ainv, &[0, 0], &self.neg2(&x), &x)
            }
            2 => {
                let ainv = self.a_inv_of(&x);
                self.stack(&x, &self.neg2(&x), &[0, 0], &ainv)
            }
            3 => {
                let ax = self.a_of(&x);
                self.stack(&x, &[0, 0], &[0, 0], &ax)
            }
            _ => panic!("class out of range"),
        }
    }

    /// 4x2 block with columns (top0, bot0) and (top1, bot1).
    fn stack(&self, top0: &[u16; 2], bot0: &[u16; 2], top1: &[u16; 2], bot1: &[u16; 2]) -> Mat {
        Mat::from_cols(
            self.base.clone(),
            &[
                vec![top0[0], top0[1], bot0[0], bot0[1]],
                vec![top1[0], top1[1], bot1[0], bot1[1]],
            ],
        )
    }

    /// The repair subspace W_z of the bandwidth family, as a 4x2 basis.
    /// W_1 = 0 + E, W_2 = E + 0, W_3 = {(u, -u)}, W_4 = {(u, -B(u))} with
    /// B = I + (sigma/tau) A.
    pub fn bw_repair_space(&self, z: usize) -> Mat {
        let f = &self.base;
        match z {
            1 => Mat::from_cols(
                self.base.clone(),
                &[vec![0, 0, 1, 0], vec![0, 0, 0, 1]],
            ),
            2 => Mat::from_cols(
                self.base.clone(),
                &[vec![1, 0, 0, 0], vec![0, 1, 0, 0]],
            ),
            3 => {
                let m1 = f.neg(1);
                Mat::from_cols(
                    self.base.clone(),
                    &[vec![1, 0, m1, 0], vec![0, 1, 0, m1]],
                )
            }
            4 => {
                let s_over_t = f.div(self.sigma, self.tau).unwrap();
                let b = Mat::identity(self.base.clone(), 2)
                    .add(&self.mat_a.scale(s_over_t))
                    .unwrap();
                let e1 = apply2(f, &b, &[1, 0]);
                let e2 = apply2(f, &b, &[0, 1]);
                Mat::from_cols(
                    self.base.clone(),
                    &[
                        vec![1, 0, f.neg(e1[0]), f.neg(e1[1])],
                        vec![0, 1, f.neg(e2[0]), f.neg(e2[1])],
                    ],
                )
            }
            _ => panic!("class out of range"),
        }
    }

    /// The repair subspace W_z of the I/O family (z in 1..=3; same as the
    /// bandwidth family's first three).
    pub fn io_repair_space(&self, z: usize) -> Mat {
        assert!((1..=3).contains(&z));
        self.bw_repair_space(z)
    }
}

pub(crate) fn apply2(f: &FieldCtx, m: &Mat, v: &[u16; 2]) -> [u16; 2] {
    [
        f.add(f.mul(m.get(0, 0), v[0]), f.mul(m.get(0, 1), v[1])),
        f.add(f.mul(m.get(1, 0), v[0]), f.mul(m.get(1, 1), v[1])),
    ]
}

/// dim(column span of a /\ column span of b) for 4x2 blocks.
pub(crate) fn meet_dim(a: &Mat, b: &Mat) -> usize {
    let stacked = a.hstack(b).expect("same field");
    a.cols() + b.cols() - stacked.rank()
}
