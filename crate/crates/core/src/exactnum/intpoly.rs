//! Univariate polynomials over exact rationals: gcd, square-free part,
//! Sturm chains, real-root counting and isolation.
//!
//! Used to validate group presentations (semisimplicity, real positive
//! spectra) and to refine eigenvalues to floating point for the candidate
//! proposers.  Every decision made here is exact; floats appear only in the
//! final refinement step.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Polynomial with `coeffs[i]` the coefficient of `x^i`; no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatPoly {
    coeffs: Vec<BigRational>,
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> RatPoly {
        while coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            coeffs.pop();
        }
        RatPoly { coeffs }
    }

    pub fn from_bigint_coeffs(coeffs: &[BigInt]) -> RatPoly {
        RatPoly::new(
            coeffs
                .iter()
                .map(|c| BigRational::from(c.clone()))
                .collect(),
        )
    }

    pub fn zero() -> RatPoly {
        RatPoly { coeffs: vec![] }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `0` for the zero polynomial.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c.to_f64().unwrap_or(f64::NAN);
        }
        acc
    }

    pub fn derivative(&self) -> RatPoly {
        if self.coeffs.len() <= 1 {
            return RatPoly::zero();
        }
        RatPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from(BigInt::from(i)))
                .collect(),
        )
    }

    fn scale(&self, s: &BigRational) -> RatPoly {
        RatPoly::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn monic(&self) -> RatPoly {
        match self.leading() {
            Some(l) if !l.is_zero() => self.scale(&l.recip()),
            _ => self.clone(),
        }
    }

    pub fn sub(&self, other: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![BigRational::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            out[i] -= c;
        }
        RatPoly::new(out)
    }

    pub fn mul(&self, other: &RatPoly) -> RatPoly {
        if self.is_zero() || other.is_zero() {
            return RatPoly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RatPoly::new(out)
    }

    /// Quotient and remainder of division by a nonzero polynomial.
    pub fn div_rem(&self, den: &RatPoly) -> (RatPoly, RatPoly) {
        assert!(!den.is_zero(), "division by zero polynomial");
        let mut rem = self.clone();
        let mut quot = vec![BigRational::zero(); self.coeffs.len()];
        let dlead = den.leading().unwrap().clone();
        while !rem.is_zero() && rem.degree() >= den.degree() {
            let shift = rem.degree() - den.degree();
            let factor = rem.leading().unwrap() / &dlead;
            quot[shift] = factor.clone();
            let mut sub = vec![BigRational::zero(); shift];
            sub.extend(den.coeffs.iter().map(|c| c * &factor));
            rem = rem.sub(&RatPoly::new(sub));
        }
        (RatPoly::new(quot), rem)
    }

    /// Monic gcd by the Euclidean algorithm.
    pub fn gcd(&self, other: &RatPoly) -> RatPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `self / gcd(self, self')`: same roots, all simple.
    pub fn squarefree_part(&self) -> RatPoly {
        if self.degree() == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        if g.degree() == 0 {
            return self.monic();
        }
        self.div_rem(&g).0.monic()
    }

    /// Sturm chain of the square-free polynomial `self`.
    fn sturm_chain(&self) -> Vec<RatPoly> {
        let mut chain = vec![self.clone(), self.derivative()];
        loop {
            let n = chain.len();
            if chain[n - 1].is_zero() {
                chain.pop();
                return chain;
            }
            let (_, r) = chain[n - 2].div_rem(&chain[n - 1]);
            if r.is_zero() {
                return chain;
            }
            chain.push(r.scale(&-BigRational::one()));
        }
    }

    fn sign_variations<F: Fn(&RatPoly) -> i32>(chain: &[RatPoly], sign_of: F) -> usize {
        let mut count = 0;
        let mut last = 0i32;
        for p in chain {
            let s = sign_of(p);
            if s != 0 {
                if last != 0 && s != last {
                    count += 1;
                }
                last = s;
            }
        }
        count
    }

    fn sign_at(p: &RatPoly, x: &BigRational) -> i32 {
        let v = p.eval(x);
        if v.is_zero() {
            0
        } else if v.is_positive() {
            1
        } else {
            -1
        }
    }

    fn sign_at_pos_inf(p: &RatPoly) -> i32 {
        match p.leading() {
            None => 0,
            Some(l) if l.is_positive() => 1,
            _ => -1,
        }
    }

    fn sign_at_neg_inf(p: &RatPoly) -> i32 {
        match p.leading() {
            None => 0,
            Some(l) => {
                let s = if l.is_positive() { 1 } else { -1 };
                if p.degree() % 2 == 0 {
                    s
                } else {
                    -s
                }
            }
        }
    }

    /// Number of distinct real roots in the half-open interval `(a, b]`.
    pub fn count_real_roots_between(&self, a: &BigRational, b: &BigRational) -> usize {
        let sf = self.squarefree_part();
        let chain = sf.sturm_chain();
        let va = Self::sign_variations(&chain, |p| Self::sign_at(p, a));
        let vb = Self::sign_variations(&chain, |p| Self::sign_at(p, b));
        va.saturating_sub(vb)
    }

    /// Number of distinct real roots on the whole line.
    pub fn count_real_roots(&self) -> usize {
        let sf = self.squarefree_part();
        let chain = sf.sturm_chain();
        let vneg = Self::sign_variations(&chain, Self::sign_at_neg_inf);
        let vpos = Self::sign_variations(&chain, Self::sign_at_pos_inf);
        vneg.saturating_sub(vpos)
    }

    /// True when every complex root is a positive real number.
    pub fn all_roots_real_positive(&self) -> bool {
        if self.is_zero() {
            return false;
        }
        if self.degree() == 0 {
            return true;
        }
        let sf = self.squarefree_part();
        let deg = sf.degree();
        if self.eval(&BigRational::zero()).is_zero() {
            return false;
        }
        if sf.count_real_roots() != deg {
            return false;
        }
        sf.count_real_roots_between(&BigRational::zero(), &Self::root_bound(&sf)) == deg
    }

    /// Cauchy bound: every real root lies in `[-B, B]`.
    fn root_bound(p: &RatPoly) -> BigRational {
        let lead = p.leading().expect("nonzero").clone();
        let mut max = BigRational::zero();
        for c in &p.coeffs[..p.coeffs.len() - 1] {
            let r = (c / &lead).abs();
            if r > max {
                max = r;
            }
        }
        max + BigRational::one()
    }

    /// All real roots of the square-free part, refined to `f64`, ascending.
    pub fn real_roots_f64(&self) -> Vec<f64> {
        let sf = self.squarefree_part();
        if sf.degree() == 0 {
            return vec![];
        }
        let chain = sf.sturm_chain();
        let variations_at =
            |x: &BigRational| Self::sign_variations(&chain, |p| Self::sign_at(p, x));
        let bound = Self::root_bound(&sf);
        let mut intervals = vec![(-bound.clone(), bound.clone())];
        let mut isolated = Vec::new();
        while let Some((lo, hi)) = intervals.pop() {
            let n = variations_at(&lo).saturating_sub(variations_at(&hi));
            match n {
                0 => {}
                1 => isolated.push((lo, hi)),
                _ => {
                    let mid = (&lo + &hi) / BigRational::from(BigInt::from(2));
                    if Self::sign_at(&sf, &mid) == 0 {
                        // The split point is itself a root: shave off a strip
                        // around it that provably contains no other root.
                        let mut eps = (&hi - &lo) / BigRational::from(BigInt::from(1024));
                        let two = BigRational::from(BigInt::from(2));
                        let mut mid2 = &mid + &eps;
                        while variations_at(&mid).saturating_sub(variations_at(&mid2)) > 1 {
                            eps = &eps / &two;
                            mid2 = &mid + &eps;
                        }
                        intervals.push((lo, mid.clone()));
                        intervals.push((mid2.clone(), hi));
                        isolated.push((mid.clone(), mid2));
                    } else {
                        intervals.push((lo, mid.clone()));
                        intervals.push((mid, hi));
                    }
                }
            }
        }
        let mut roots: Vec<f64> = isolated
            .into_iter()
            .map(|(mut lo, mut hi)| {
                // Exact bisection until f64 resolution, then a Newton polish.
                for _ in 0..80 {
                    let mid = (&lo + &hi) / BigRational::from(BigInt::from(2));
                    let s = Self::sign_at(&sf, &mid);
                    if s == 0 {
                        lo = mid.clone();
                        hi = mid;
                        break;
                    }
                    if s == Self::sign_at(&sf, &lo) {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                    if (&hi - &lo).to_f64().unwrap_or(0.0) < 1e-14 {
                        break;
                    }
                }
                let mut x = ((&lo + &hi) / BigRational::from(BigInt::from(2)))
                    .to_f64()
                    .unwrap_or(0.0);
                let d = sf.derivative();
                for _ in 0..4 {
                    let fx = sf.eval_f64(x);
                    let dx = d.eval_f64(x);
                    if dx.abs() > 1e-300 {
                        x -= fx / dx;
                    }
                }
                x
            })
            .collect();
        roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
        roots
    }

    /// Extended Euclid: returns `(s, t)` with `s*self + t*other = gcd` where
    /// the gcd is monic.  Both inputs must be nonzero and coprime callers
    /// typically expect gcd = 1.
    pub fn extended_gcd(&self, other: &RatPoly) -> (RatPoly, RatPoly, RatPoly) {
        let mut r0 = self.clone();
        let mut r1 = other.clone();
        let one = RatPoly::new(vec![BigRational::one()]);
        let mut s0 = one.clone();
        let mut s1 = RatPoly::zero();
        let mut t0 = RatPoly::zero();
        let mut t1 = one;
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s = s0.sub(&q.mul(&s1));
            let t = t0.sub(&q.mul(&t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
            t0 = t1;
            t1 = t;
        }
        // Normalize to a monic gcd.
        let lead = r0.leading().cloned().unwrap_or_else(BigRational::one);
        let inv = lead.recip();
        (s0.scale(&inv), t0.scale(&inv), r0.scale(&inv))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(coeffs: &[i64]) -> RatPoly {
        RatPoly::new(
            coeffs
                .iter()
                .map(|&c| BigRational::from(BigInt::from(c)))
                .collect(),
        )
    }

    #[test]
    fn squarefree_strips_multiplicity() {
        // (x-1)^2 -> x - 1
        let p = poly(&[1, -2, 1]);
        assert_eq!(p.squarefree_part(), poly(&[-1, 1]).monic());
    }

    #[test]
    fn root_counting() {
        // x^2 - 3x + 1: two positive real roots
        let p = poly(&[1, -3, 1]);
        assert_eq!(p.count_real_roots(), 2);
        assert!(p.all_roots_real_positive());
        // x^2 + 1: no real roots
        assert_eq!(poly(&[1, 0, 1]).count_real_roots(), 0);
        assert!(!poly(&[1, 0, 1]).all_roots_real_positive());
        // x^2 - 1: real but one negative
        assert!(!poly(&[-1, 0, 1]).all_roots_real_positive());
        // x^2 - 4x + 4 = (x-2)^2: all roots positive real (with multiplicity)
        assert!(poly(&[4, -4, 1]).all_roots_real_positive());
        // x(x-1): zero root disqualifies
        assert!(!poly(&[0, -1, 1]).all_roots_real_positive());
    }

    #[test]
    fn real_roots_refine() {
        let p = poly(&[1, -3, 1]);
        let roots = p.real_roots_f64();
        assert_eq!(roots.len(), 2);
        let lo = (3.0 - 5f64.sqrt()) / 2.0;
        let hi = (3.0 + 5f64.sqrt()) / 2.0;
        assert!((roots[0] - lo).abs() < 1e-12);
        assert!((roots[1] - hi).abs() < 1e-12);
    }

    #[test]
    fn extended_gcd_bezout() {
        // (x-1) and (x-2) are coprime
        let a = poly(&[-1, 1]);
        let b = poly(&[-2, 1]);
        let (s, t, g) = a.extended_gcd(&b);
        assert_eq!(g, poly(&[1]));
        let combo = s.mul(&a).sub(&t.mul(&b).scale(&-BigRational::one()));
        assert_eq!(combo, poly(&[1]));
    }
}
