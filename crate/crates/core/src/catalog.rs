//! Named measurement bases and diagnostics on sets of bases.
//!
//! The qubit family returned by [`pauli_bases`] is the labelled triple
//! commonly used for the two-basis partner example:
//!
//! ```text
//! B_x = {(1,0), (0,1)}
//! B_y = {(1,1)/sqrt2, (1,-1)/sqrt2}
//! B_z = {(1,i)/sqrt2, (i,1)/sqrt2}
//! ```
//!
//! The labels do not match the eigenbases of the matrices conventionally
//! called `S_x`, `S_y`, `S_z` (the vectors of `B_x` diagonalize `S_z`, for
//! instance). [`spin_observable_bases`] diagonalizes the actual spin matrices
//! and labels its bases `S_x`, `S_y`, `S_z`.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::error::{Error, Result};
use crate::hilbert::{canonicalize_amplitudes, dot, random_basis, ObservableBasis, C64};

/// A named set of bases sharing one dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisFamily {
    pub name: String,
    pub bases: Vec<ObservableBasis>,
    /// See [`unbiasedness`]; 1 when the family has fewer than two bases.
    pub unbiasedness: f64,
}

impl BasisFamily {
    pub fn new(name: impl Into<String>, bases: Vec<ObservableBasis>) -> Result<Self> {
        let first = bases.first().ok_or(Error::EmptyBases)?;
        let d = first.dim();
        for b in &bases {
            crate::error::check_dim(d, b.dim())?;
        }
        let unbiasedness = if bases.len() >= 2 {
            unbiasedness_of(&bases)?
        } else {
            1.0
        };
        Ok(Self {
            name: name.into(),
            bases,
            unbiasedness,
        })
    }

    pub fn dim(&self) -> usize {
        self.bases[0].dim()
    }

    pub fn get(&self, label: &str) -> Option<&ObservableBasis> {
        self.bases.iter().find(|b| b.label() == label)
    }

    /// Sub-family with the given labels, in the order given.
    pub fn select(&self, labels: &[String]) -> Result<BasisFamily> {
        let bases = labels
            .iter()
            .map(|l| self.get(l).cloned().ok_or_else(|| Error::UnknownFamily(l.clone())))
            .collect::<Result<Vec<_>>>()?;
        BasisFamily::new(format!("{}[{}]", self.name, labels.join(",")), bases)
    }
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn pauli_bases() -> BasisFamily {
    let s = FRAC_1_SQRT_2;
    let bx = vec![vec![c(1.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), c(1.0, 0.0)]];
    let by = vec![vec![c(s, 0.0), c(s, 0.0)], vec![c(s, 0.0), c(-s, 0.0)]];
    let bz = vec![vec![c(s, 0.0), c(0.0, s)], vec![c(0.0, s), c(s, 0.0)]];
    let bases = vec![
        ObservableBasis::new(bx, "B_x").expect("orthonormal"),
        ObservableBasis::new(by, "B_y").expect("orthonormal"),
        ObservableBasis::new(bz, "B_z").expect("orthonormal"),
    ];
    BasisFamily::new("pauli", bases).expect("consistent family")
}

/// `S_x`, `S_y`, `S_z` for spin `j = two_j / 2` in the `S_z` eigenbasis,
/// ordered `m = j, j-1, ..., -j`, with hbar = 1.
pub fn spin_matrices(two_j: u32) -> Result<[DMatrix<C64>; 3]> {
    if !(1..=2).contains(&two_j) {
        return Err(Error::UnsupportedSpin(two_j));
    }
    let d = two_j as usize + 1;
    let j = two_j as f64 / 2.0;
    let mut raise = DMatrix::<C64>::zeros(d, d);
    // row k holds m = j - k; S+ |m> = sqrt(j(j+1) - m(m+1)) |m+1>
    for k in 1..d {
        let m = j - k as f64;
        raise[(k - 1, k)] = c((j * (j + 1.0) - m * (m + 1.0)).sqrt(), 0.0);
    }
    let lower = raise.adjoint();
    let sx = (&raise + &lower) * c(0.5, 0.0);
    let sy = (&raise - &lower) * c(0.0, -0.5);
    let sz = DMatrix::from_fn(d, d, |r, col| if r == col { c(j - r as f64, 0.0) } else { c(0.0, 0.0) });
    Ok([sx, sy, sz])
}

/// Eigen-decomposition of a Hermitian matrix: eigenvalues in decreasing order
/// and the matching eigenvectors, each in canonical ray form.
pub fn hermitian_eigenbasis(matrix: &DMatrix<C64>, label: &str) -> Result<(Vec<f64>, ObservableBasis)> {
    let eig = SymmetricEigen::new(matrix.clone());
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let mut values = Vec::with_capacity(order.len());
    let mut vectors = Vec::with_capacity(order.len());
    for k in order {
        values.push(eig.eigenvalues[k]);
        let mut v: Vec<C64> = eig.eigenvectors.column(k).iter().copied().collect();
        canonicalize_amplitudes(&mut v)?;
        vectors.push(v);
    }
    Ok((values, ObservableBasis::new(vectors, label)?))
}

/// Eigenbases of the spin components for spin 1/2 (`two_j = 1`) or spin 1
/// (`two_j = 2`).
pub fn spin_observable_bases(two_j: u32) -> Result<BasisFamily> {
    let labels = ["S_x", "S_y", "S_z"];
    let bases = spin_matrices(two_j)?
        .iter()
        .zip(labels)
        .map(|(m, l)| hermitian_eigenbasis(m, l).map(|(_, b)| b))
        .collect::<Result<Vec<_>>>()?;
    let name = if two_j == 1 { "spin-1/2" } else { "spin-1" };
    BasisFamily::new(name, bases)
}

/// Discrete Fourier basis: `F_k[n] = exp(2 pi i n k / d) / sqrt d`.
pub fn fourier_basis(dim: usize) -> Result<ObservableBasis> {
    if dim < 2 {
        return Err(Error::DimensionTooSmall(dim));
    }
    let scale = 1.0 / (dim as f64).sqrt();
    let vectors = (0..dim)
        .map(|k| {
            (0..dim)
                .map(|n| C64::from_polar(scale, 2.0 * PI * ((n * k) % dim) as f64 / dim as f64))
                .collect()
        })
        .collect();
    ObservableBasis::new(vectors, "fourier")
}

/// How close a set of bases is to being mutually unbiased.
///
/// With `B_kl = |<phi^a_k, phi^b_l>|^2` for each pair of bases `(a, b)`,
///
/// ```text
/// u = 1 - sum_{a<b} sum_{k,l} (B_kl - 1/d)^2 / (P (d - 1))
/// ```
///
/// where `P` is the number of basis pairs. A single pair contributes at most
/// `d - 1` (reached when the two bases coincide up to phases and order), so
/// `u` lies in `[0, 1]`, equals 1 exactly for mutually unbiased families and
/// is below 1 as soon as two bases share a vector.
pub fn unbiasedness(family: &BasisFamily) -> Result<f64> {
    unbiasedness_of(&family.bases)
}

fn unbiasedness_of(bases: &[ObservableBasis]) -> Result<f64> {
    if bases.len() < 2 {
        return Err(Error::InvalidParameter("unbiasedness needs at least two bases".into()));
    }
    let d = bases[0].dim();
    let flat = 1.0 / d as f64;
    let mut total = 0.0;
    let mut pairs = 0usize;
    for (a, ba) in bases.iter().enumerate() {
        for bb in &bases[a + 1..] {
            crate::error::check_dim(d, bb.dim())?;
            pairs += 1;
            for u in ba.vectors() {
                for v in bb.vectors() {
                    let dev = dot(u, v).norm_sqr() - flat;
                    total += dev * dev;
                }
            }
        }
    }
    let u = 1.0 - total / (pairs as f64 * (d as f64 - 1.0));
    Ok(u.clamp(0.0, 1.0))
}

/// Lower bound on the number of rank-one POVM elements of an informationally
/// complete measurement for pure states in dimension `dim`: the count must
/// strictly exceed the returned value.
///
/// With `alpha` the number of ones in the binary expansion of `dim - 1`:
/// `4d - 2 alpha - 3` for odd `d` with `alpha = 2 (mod 4)`, `4d - 2 alpha - 2`
/// for odd `d` with `alpha = 3 (mod 4)`, otherwise `4d - 2 alpha - 4`.
pub fn povm_lower_bound(dim: u64) -> Result<u64> {
    if dim <= 1 {
        return Err(Error::DimensionTooSmall(dim as usize));
    }
    let alpha = u64::from((dim - 1).count_ones());
    let base = 4 * dim - 2 * alpha;
    let odd = dim % 2 == 1;
    Ok(match alpha % 4 {
        2 if odd => base - 3,
        3 if odd => base - 2,
        _ => base - 4,
    })
}

/// Resolve a family by name: `pauli`, `spin-1/2`, `spin-1`, `fourier:<d>`
/// (standard and Fourier bases) or `random:<d>:<m>:<seed>` (`m` Haar-random
/// bases labelled `R0`, `R1`, ...).
pub fn family_by_name(name: &str) -> Result<BasisFamily> {
    let unknown = || Error::UnknownFamily(name.to_string());
    let parts: Vec<&str> = name.split(':').collect();
    match parts.as_slice() {
        ["pauli"] => Ok(pauli_bases()),
        ["spin-1/2"] => spin_observable_bases(1),
        ["spin-1"] => spin_observable_bases(2),
        ["fourier", d] => {
            let d: usize = d.parse().map_err(|_| unknown())?;
            let bases = vec![ObservableBasis::standard(d)?, fourier_basis(d)?];
            BasisFamily::new(name, bases)
        }
        ["random", d, m, seed] => {
            let d: usize = d.parse().map_err(|_| unknown())?;
            let m: usize = m.parse().map_err(|_| unknown())?;
            let seed: u64 = seed.parse().map_err(|_| unknown())?;
            if m == 0 {
                return Err(Error::EmptyBases);
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let bases = (0..m)
                .map(|j| random_basis(d, &mut rng).map(|b| b.with_label(format!("R{j}"))))
                .collect::<Result<Vec<_>>>()?;
            BasisFamily::new(name, bases)
        }
        _ => Err(unknown()),
    }
}
