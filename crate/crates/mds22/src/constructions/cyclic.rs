//! The cyclic projective-line machinery behind the long-length
//! constructions.
//!
//! T is multiplication by theta = eta + 1, where eta in GF(q^2) has
//! order q+1, written in the basis {1, theta}. Its projective class tau
//! has order q+1 in PGL_2(GF(q)), satisfies [T - I] = [tau]^2, and the
//! orbit of any projective point under tau runs through all of P^1.
//! Labels t in Z/(q+1) name the points p_t = tau^t(p_0) with base point
//! p_0 = <(0,1)>.
//!
//! Node subspaces are drawn from three templates over label pairs,
//!   L1(x,y) = <(p_x,0),(0,p_y)>,
//!   L2(x,y) = <(p_x,0),(p_y,p_y)>,
//!   L3(x,y) = <(0,p_x),(p_y,p_y)>,
//! and from graphs G(A) = {(Av, v)}; the repair subspaces are the two
//! coordinate planes, G(I) and G(T).

use std::sync::Arc;

use crate::constructions::orbit::apply2;
use crate::constructions::ConstructError;
use crate::gf::{embedding_table, FieldCtx};
use crate::linalg::{normalize_direction, Mat};

#[derive(Debug, Clone)]
pub struct CyclicT {
    pub base: Arc<FieldCtx>,
    /// T^2 = c*T - c*I; the characteristic polynomial x^2 - cx + c is
    /// irreducible over GF(q), so the algebra generated by T is a field
    /// of size q^2.
    pub c: u16,
    pub t_mat: Mat,
    /// Canonical representatives of p_t = tau^t(p_0), length q+1.
    labels: Vec<[u16; 2]>,
}

impl CyclicT {
    pub fn new(q: u32) -> Result<CyclicT, ConstructError> {
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
        let eta = ext.pow(xi, (q - 1) as u64);
        debug_assert_eq!(ext.order(eta), q + 1);
        let theta = ext.add(eta, 1);
        // theta^(q+1) = theta^2 / eta lies in GF(q)
        let c = unembed(ext.pow(theta, (q + 1) as u64));
        assert!(c != 0);

        // multiplication by theta in basis {1, theta}: theta^2 = c*theta - c
        let t_mat = Mat::new(base.clone(), 2, 2, vec![0, base.neg(c), 1, c]).unwrap();

        let mut labels = Vec::with_capacity(q as usize + 1);
        let mut p = [0u16, 1u16];
        for _ in 0..=q {
            let dir = normalize_direction(&base, &p);
            labels.push([dir[0], dir[1]]);
            p = apply2(&base, &t_mat, &p);
        }
        for i in 0..labels.len() {
            for j in i + 1..labels.len() {
                assert_ne!(labels[i], labels[j], "projective orbit must have length q+1");
            }
        }
        Ok(CyclicT { base, c, t_mat, labels })
    }

    pub fn q(&self) -> u32 {
        self.base.q()
    }

    /// Canonical representative of the point with label t (mod q+1).
    pub fn point(&self, t: i64) -> [u16; 2] {
        let n = self.labels.len() as i64;
        self.labels[(((t % n) + n) % n) as usize]
    }

    /// Label of a non-zero vector's projective class.
    pub fn label_of(&self, v: &[u16; 2]) -> i64 {
        let dir = normalize_direction(&self.base, v);
        self.labels
            .iter()
            .position(|d| d[0] == dir[0] && d[1] == dir[1])
            .expect("every point is on the orbit") as i64
    }

    /// Discrete log of an invertible element of the algebra generated by
    /// T: the unique i in Z/(q+1) with `[B] = [T]^i` projectively.
    pub fn projective_class(&self, b: &Mat) -> Option<i64> {
        let mut power = Mat::identity(self.base.clone(), 2);
        for i in 0..self.labels.len() as i64 {
            if is_scalar_multiple(b, &power) {
                return Some(i);
            }
            power = self.t_mat.mul(&power).unwrap();
        }
        None
    }

    fn stack(&self, top: &[u16; 2], bot: &[u16; 2], top2: &[u16; 2], bot2: &[u16; 2]) -> Mat {
        Mat::from_cols(
            self.base.clone(),
            &[
                vec![top[0], top[1], bot[0], bot[1]],
                vec![top2[0], top2[1], bot2[0], bot2[1]],
            ],
        )
    }

    pub fn l1(&self, x: i64, y: i64) -> Mat {
        let px = self.point(x);
        let py = self.point(y);
        self.stack(&px, &[0, 0], &[0, 0], &py)
    }

    pub fn l2(&self, x: i64, y: i64) -> Mat {
        let px = self.point(x);
        let py = self.point(y);
        self.stack(&px, &[0, 0], &py, &py)
    }

    pub fn l3(&self, x: i64, y: i64) -> Mat {
        let px = self.point(x);
        let py = self.point(y);
        self.stack(&[0, 0], &px, &py, &py)
    }

    /// The graph subspace {(Av, v)} as a 4x2 block.
    pub fn graph(&self, a: &Mat) -> Mat {
        let e1 = apply2(&self.base, a, &[1, 0]);
        let e2 = apply2(&self.base, a, &[0, 1]);
        self.stack(&e1, &[1, 0], &e2, &[0, 1])
    }

    /// Repair subspaces W_1 = F^2 + 0, W_2 = 0 + F^2, W_3 = G(I),
    /// W_4 = G(T), as 4x2 bases.
    pub fn repair_space(&self, z: usize) -> Mat {
        match z {
            1 => Mat::from_cols(self.base.clone(), &[vec![1, 0, 0, 0], vec![0, 1, 0, 0]]),
            2 => Mat::from_cols(self.base.clone(), &[vec![0, 0, 1, 0], vec![0, 0, 0, 1]]),
            3 => self.graph(&Mat::identity(self.base.clone(), 2)),
            4 => self.graph(&self.t_mat),
            _ => panic!("class out of range"),
        }
    }
}

/// Whether b = s * a for some non-zero scalar s.
pub fn is_scalar_multiple(b: &Mat, a: &Mat) -> bool {
    let f = b.ctx();
    let mut scale: Option<u16> = None;
    for (&x, &y) in b.entries().iter().zip(a.entries()) {
        match (x, y) {
            (0, 0) => continue,
            (_, 0) | (0, _) => return false,
            (x, y) => {
                let s = f.div(x, y).unwrap();
                match scale {
                    None => scale = Some(s),
                    Some(prev) if prev != s => return false,
                    _ => {}
                }
            }
        }
    }
    scale.is_some()
}
