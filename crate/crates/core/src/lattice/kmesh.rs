//! Monkhorst–Pack style integer k-point meshes.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Integer label `(n1, n2, n3)` of a mesh point, `0 <= n_i < N_i`.
#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize,
)]
pub struct KPoint(pub [usize; 3]);

impl fmt::Display for KPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.0[0], self.0[1], self.0[2])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct KMesh {
    dims: [usize; 3],
}

impl KMesh {
    pub fn new(dims: [usize; 3]) -> Result<Self> {
        if dims.contains(&0) {
            return Err(Error::InvalidInput(format!(
                "mesh dimensions must be positive, got {dims:?}"
            )));
        }
        Ok(KMesh { dims })
    }

    /// The single-point mesh.
    pub fn gamma() -> Self {
        KMesh { dims: [1, 1, 1] }
    }

    /// A one-dimensional mesh along the third axis.
    pub fn chain(n: usize) -> Result<Self> {
        KMesh::new([1, 1, n])
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    pub fn num_kpoints(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn contains(&self, k: KPoint) -> bool {
        k.0.iter().zip(self.dims).all(|(&n, d)| n < d)
    }

    /// Row-major linear index.
    pub fn linear(&self, k: KPoint) -> usize {
        debug_assert!(self.contains(k));
        let [_, n2, n3] = self.dims;
        (k.0[0] * n2 + k.0[1]) * n3 + k.0[2]
    }

    pub fn from_linear(&self, index: usize) -> KPoint {
        debug_assert!(index < self.num_kpoints());
        let [_, n2, n3] = self.dims;
        KPoint([index / (n2 * n3), (index / n3) % n2, index % n3])
    }

    pub fn points(&self) -> impl Iterator<Item = KPoint> + '_ {
        (0..self.num_kpoints()).map(move |i| self.from_linear(i))
    }

    pub fn add(&self, a: KPoint, b: KPoint) -> KPoint {
        KPoint(std::array::from_fn(|i| (a.0[i] + b.0[i]) % self.dims[i]))
    }

    pub fn neg(&self, a: KPoint) -> KPoint {
        KPoint(std::array::from_fn(|i| {
            (self.dims[i] - a.0[i] % self.dims[i]) % self.dims[i]
        }))
    }

    pub fn sub(&self, a: KPoint, b: KPoint) -> KPoint {
        self.add(a, self.neg(b))
    }

    /// Linear-index versions of the group operations.
    pub fn add_linear(&self, a: usize, b: usize) -> usize {
        self.linear(self.add(self.from_linear(a), self.from_linear(b)))
    }

    pub fn sub_linear(&self, a: usize, b: usize) -> usize {
        self.linear(self.sub(self.from_linear(a), self.from_linear(b)))
    }

    /// Whether created momenta minus annihilated momenta vanish modulo the mesh.
    pub fn momentum_allowed(&self, creation: &[KPoint], annihilation: &[KPoint]) -> bool {
        (0..3).all(|axis| {
            let d = self.dims[axis] as i64;
            let plus: i64 = creation.iter().map(|k| k.0[axis] as i64).sum();
            let minus: i64 = annihilation.iter().map(|k| k.0[axis] as i64).sum();
            (plus - minus).rem_euclid(d) == 0
        })
    }

    /// Same test on linear indices.
    pub fn momentum_allowed_linear(&self, creation: &[usize], annihilation: &[usize]) -> bool {
        let c: Vec<KPoint> = creation.iter().map(|&i| self.from_linear(i)).collect();
        let a: Vec<KPoint> = annihilation.iter().map(|&i| self.from_linear(i)).collect();
        self.momentum_allowed(&c, &a)
    }
}

/// Free-function form of [`KMesh::momentum_allowed`].
pub fn momentum_allowed(creation: &[KPoint], annihilation: &[KPoint], mesh: &KMesh) -> bool {
    mesh.momentum_allowed(creation, annihilation)
}
