//! Root multiplicity bounds for polynomials supported on a lattice ray.

use alloc::vec::Vec;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rat::{floor_i64, Q};
use crate::upoly::UPoly;

/// Exact multiplicity of `p` at `t`.
pub fn multiplicity_at(p: &UPoly, t: &Q) -> usize {
    assert!(!p.is_zero(), "multiplicity of the zero polynomial");
    let root = UPoly::linear_root(t);
    let mut cur = p.clone();
    let mut k = 0;
    loop {
        let (quo, rem) = cur.divrem(&root);
        if !rem.is_zero() {
            return k;
        }
        cur = quo;
        k += 1;
    }
}

/// Polynomial in n variables whose support lies on the ray
/// `base + t·(dir, −1)`, t ≥ 0. Coefficient `s` sits at `t = s·c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineSupportedPoly {
    pub base: Vec<u64>,
    pub dir: Vec<Q>,
    pub coeffs: Vec<Q>,
}

impl LineSupportedPoly {
    pub fn new(base: Vec<u64>, dir: Vec<Q>, coeffs: Vec<Q>) -> Result<Self> {
        if base.is_empty() || dir.len() + 1 != base.len() {
            return Err(Error::PreconditionViolated("direction must have one entry fewer than the base point".into()));
        }
        if dir.iter().any(|d| d < &Q::zero()) {
            return Err(Error::PreconditionViolated("direction entries must be nonnegative".into()));
        }
        let p = LineSupportedPoly { base, dir, coeffs };
        if p.coeffs.len() > p.lattice_points() {
            return Err(Error::PreconditionViolated("more coefficients than lattice points on the ray".into()));
        }
        if p.coeffs.first().map_or(true, |a| a.is_zero()) {
            return Err(Error::PreconditionViolated("coefficient at the base point must be nonzero".into()));
        }
        Ok(p)
    }

    pub fn top(&self) -> u64 {
        *self.base.last().unwrap()
    }

    /// lcm of the direction denominators.
    pub fn period(&self) -> u64 {
        let c = self.dir.iter().fold(BigInt::one(), |acc, d| acc.lcm(d.denom()));
        u64::try_from(c).expect("period fits in u64")
    }

    pub fn lattice_points(&self) -> usize {
        (self.top() / self.period()) as usize + 1
    }

    /// Exponent of the `s`-th support point.
    pub fn point(&self, s: usize) -> Vec<u64> {
        let t = Q::from_integer(BigInt::from(s as u64 * self.period()));
        let n = self.base.len();
        let mut e = Vec::with_capacity(n);
        for i in 0..n - 1 {
            let v = Q::from_integer(BigInt::from(self.base[i])) + &t * &self.dir[i];
            e.push(floor_i64(&v) as u64);
        }
        e.push(self.top() - s as u64 * self.period());
        e
    }

    /// Restriction to x_1 = … = x_{n−1} = 1.
    pub fn restrict(&self) -> UPoly {
        let mut c = alloc::vec![Q::zero(); self.top() as usize + 1];
        for (s, a) in self.coeffs.iter().enumerate() {
            let d = (self.top() - s as u64 * self.period()) as usize;
            c[d] += a;
        }
        UPoly::new(c)
    }

    pub fn count_bound(&self) -> u64 {
        self.top() / self.period()
    }

    /// The bound `p_n − b/a`, minimized over the admissible direction entries.
    pub fn slope_bound(&self) -> Result<Q> {
        let c = self.period();
        if self.top() < c + 1 {
            return Err(Error::PreconditionViolated(alloc::format!("top exponent {} is below c + 1 = {}", self.top(), c + 1)));
        }
        let pn = Q::from_integer(BigInt::from(self.top()));
        self.dir
            .iter()
            .filter(|d| d.numer() >= &BigInt::one() && d.numer() < d.denom())
            .map(|d| &pn - d.recip())
            .min()
            .ok_or_else(|| Error::PreconditionViolated("no direction entry with 1 ≤ a < b".into()))
    }
}

/// Largest multiplicity at a nonzero point allowed for `p`.
pub fn line_multiplicity_bound(p: &LineSupportedPoly, sharper: bool) -> Result<u64> {
    if sharper {
        let b = p.slope_bound()?;
        Ok(floor_i64(&b).max(0) as u64)
    } else {
        Ok(p.count_bound())
    }
}

/// Points at which the bounds are checked: all rational roots plus ±1, ±2.
pub fn sample_points(p: &UPoly) -> Vec<Q> {
    let mut pts: Vec<Q> = p.rational_roots().into_iter().filter(|r| !r.is_zero()).collect();
    for k in [1i64, -1, 2, -2] {
        let v = Q::from_integer(BigInt::from(k));
        if !pts.contains(&v) {
            pts.push(v);
        }
    }
    pts
}

/// Checks both bounds (the second only when its precondition holds) at
/// every sample point; returns the worst multiplicity seen.
pub fn check_bounds(p: &LineSupportedPoly) -> Result<usize> {
    let q = p.restrict();
    let prop = p.count_bound();
    let cor = p.slope_bound().ok();
    let mut worst = 0;
    for t in sample_points(&q) {
        let m = multiplicity_at(&q, &t);
        if m as u64 > prop {
            return Err(Error::PreconditionViolated(alloc::format!("multiplicity {m} at {t} exceeds {prop}")));
        }
        if let Some(b) = &cor {
            if Q::from_integer(BigInt::from(m)) > *b {
                return Err(Error::PreconditionViolated(alloc::format!("multiplicity {m} at {t} exceeds {b}")));
            }
        }
        worst = worst.max(m);
    }
    Ok(worst)
}
