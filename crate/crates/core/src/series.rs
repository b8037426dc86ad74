//! Truncated formal Laurent series with explicit exactness windows.
//!
//! A `Series<T>` stores finitely many coefficients together with a window
//! `[lo, hi]`: the support is contained in `[lo, +inf)`, coefficients with
//! exponents in the window are exact, and coefficients above `hi` are
//! unknown - never assumed zero. `hi = None` means the series is exact at
//! every exponent (a Laurent polynomial). Arithmetic narrows windows
//! conservatively, so a residue that falls outside the window is an error
//! instead of a silent wrong answer.
//!
//! All exponents are integers. Fractional powers such as (1+z)^(1/2) enter
//! only through [`Series::binomial`], which expands them with integer
//! exponents and exact rational coefficients.

use std::collections::BTreeMap;
use std::fmt;


use crate::error::{Error, Result};
use crate::linear::{AddGroup, Coeff, Module};
use crate::scalar::{rational_binomial, Scalar};

fn min_opt(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (None, x) => x,
        (x, None) => x,
        (Some(x), Some(y)) => Some(x.min(y)),
    }
}

fn add_opt(a: Option<i64>, b: i64) -> Option<i64> {
    a.map(|x| x + b)
}

#[derive(Clone)]
pub struct Series<T: AddGroup> {
    coeffs: BTreeMap<i64, T>,
    lo: i64,
    hi: Option<i64>,
}

impl<T: AddGroup> Series<T> {
    /// The exact zero series.
    pub fn zero() -> Self {
        Series {
            coeffs: BTreeMap::new(),
            lo: 0,
            hi: None,
        }
    }

    /// A single exact term t * z^e.
    pub fn monomial(t: T, e: i64) -> Self {
        let mut coeffs = BTreeMap::new();
        if !t.is_zero() {
            coeffs.insert(e, t);
        }
        Series {
            coeffs,
            lo: e,
            hi: None,
        }
    }

    pub fn constant(t: T) -> Self {
        Series::monomial(t, 0)
    }

    /// Build from explicit coefficients with the given window. Stored
    /// exponents must lie inside the window.
    pub fn from_coeffs(coeffs: impl IntoIterator<Item = (i64, T)>, lo: i64, hi: Option<i64>) -> Self {
        let mut map = BTreeMap::new();
        for (e, t) in coeffs {
            assert!(e >= lo, "exponent {e} below window start {lo}");
            if let Some(h) = hi {
                assert!(e <= h, "exponent {e} above window end {h}");
            }
            if !t.is_zero() {
                map.insert(e, t);
            }
        }
        Series { coeffs: map, lo, hi }.tightened()
    }

    /// Raise `lo` to the least stored exponent. Coefficients skipped over are
    /// stored-zero inside the window, hence known zeros, so the support claim
    /// stays valid while products retain the widest justified windows.
    fn tightened(mut self) -> Self {
        if let Some((&min_e, _)) = self.coeffs.iter().next() {
            if min_e > self.lo {
                self.lo = min_e;
            }
        }
        self
    }

    pub fn window_lo(&self) -> i64 {
        self.lo
    }

    pub fn window_hi(&self) -> Option<i64> {
        self.hi
    }

    pub fn window_string(&self) -> String {
        match self.hi {
            Some(h) => format!("[{}, {}]", self.lo, h),
            None => format!("[{}, +inf)", self.lo),
        }
    }

    fn known(&self, e: i64) -> bool {
        e < self.lo || self.hi.map_or(true, |h| e <= h)
    }

    /// Exact coefficient of z^e; an error when e lies above the window.
    pub fn coeff(&self, e: i64) -> Result<T> {
        if self.known(e) {
            Ok(self.coeffs.get(&e).cloned().unwrap_or_else(T::zero))
        } else {
            Err(Error::Truncated {
                exp: e,
                window: self.window_string(),
            })
        }
    }

    /// Coefficient of z^{-1}.
    pub fn residue(&self) -> Result<T> {
        self.coeff(-1)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&i64, &T)> {
        self.coeffs.iter()
    }

    pub fn is_known_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let lo = self.lo.min(other.lo);
        let hi = min_opt(self.hi, other.hi);
        let mut map = self.coeffs.clone();
        for (e, t) in &other.coeffs {
            let entry = map.remove(e);
            let sum = match entry {
                None => t.clone(),
                Some(old) => old + t,
            };
            if !sum.is_zero() {
                map.insert(*e, sum);
            }
        }
        if let Some(h) = hi {
            map.retain(|e, _| *e <= h);
        }
        Series { coeffs: map, lo, hi }.tightened()
    }

    pub fn neg(&self) -> Self {
        Series {
            coeffs: self.coeffs.iter().map(|(e, t)| (*e, -t.clone())).collect(),
            lo: self.lo,
            hi: self.hi,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Multiply every exponent shift: z^d * self.
    pub fn shift(&self, d: i64) -> Self {
        Series {
            coeffs: self.coeffs.iter().map(|(e, t)| (e + d, t.clone())).collect(),
            lo: self.lo + d,
            hi: self.hi.map(|h| h + d),
        }
    }

    /// Narrow the window to end at new_hi, discarding higher terms.
    pub fn truncate(&self, new_hi: i64) -> Self {
        let hi = min_opt(self.hi, Some(new_hi));
        let mut coeffs = self.coeffs.clone();
        if let Some(h) = hi {
            coeffs.retain(|e, _| *e <= h);
        }
        Series {
            coeffs,
            lo: self.lo,
            hi,
        }
        .tightened()
    }

    pub fn map<U: AddGroup>(&self, f: impl Fn(&T) -> U) -> Series<U> {
        let mut coeffs = BTreeMap::new();
        for (e, t) in &self.coeffs {
            let u = f(t);
            if !u.is_zero() {
                coeffs.insert(*e, u);
            }
        }
        Series {
            coeffs,
            lo: self.lo,
            hi: self.hi,
        }
        .tightened()
    }

    /// Coefficient-wise scaling by a single element of `C`.
    pub fn scale_all<C: Coeff>(&self, c: &C) -> Self
    where
        T: Module<C>,
    {
        if c.is_zero() {
            return Series {
                coeffs: BTreeMap::new(),
                lo: self.lo,
                hi: self.hi,
            };
        }
        self.map(|t| t.scale(c))
    }

    /// Product with a scalar-coefficient series; the window is the tightest
    /// interval on which every contributing term is known.
    pub fn scale_series<C: Coeff>(&self, s: &Series<C>) -> Self
    where
        T: Module<C>,
    {
        let lo = self.lo + s.lo;
        let hi = min_opt(add_opt(self.hi, s.lo), add_opt(s.hi, self.lo));
        let mut map: BTreeMap<i64, T> = BTreeMap::new();
        for (e1, t) in &self.coeffs {
            for (e2, c) in &s.coeffs {
                let e = e1 + e2;
                if let Some(h) = hi {
                    if e > h {
                        continue;
                    }
                }
                let term = t.scale(c);
                if term.is_zero() {
                    continue;
                }
                let cur = map.remove(&e);
                let sum = match cur {
                    None => term,
                    Some(old) => old + &term,
                };
                if !sum.is_zero() {
                    map.insert(e, sum);
                }
            }
        }
        Series { coeffs: map, lo, hi }.tightened()
    }

    /// Substitution g(f(x)) for f with zero constant term and invertible
    /// linear coefficient. Negative powers f(x)^m are expanded through
    /// (a1 x)^m (1 + h(x))^m with h = sum_{i>=2} (a_i/a_1) x^{i-1} and the
    /// binomial series for (1+h)^m. The result window ends at
    /// min(order, window of g, g.lo + f.hi - 1).
    pub fn compose<C: Coeff>(&self, f: &Series<C>, order: i64) -> Result<Series<T>>
    where
        T: Module<C>,
    {
        if f.coeffs.keys().any(|&e| e < 1) {
            return Err(Error::InvalidSubstitution(
                "substituted series has terms below x^1".into(),
            ));
        }
        if !f.known(1) {
            return Err(Error::InvalidSubstitution(
                "linear coefficient of the substituted series is unknown".into(),
            ));
        }
        let a1 = f.coeffs.get(&1).cloned().unwrap_or_else(C::zero);
        if a1.is_zero() {
            return Err(Error::InvalidSubstitution(
                "substituted series has zero linear coefficient".into(),
            ));
        }
        // hout may end below self.lo; the result is then the empty window
        // [lo, hout], which still knows that everything below lo vanishes.
        let hout = match min_opt(self.hi, add_opt(f.hi, self.lo - 1)) {
            Some(h) => h.min(order),
            None => order,
        };
        let a1_inv = a1.inv()?;
        // h = f/(a1 x) - 1; support starts at x^1.
        let mut h = f.shift(-1).scale_all(&a1_inv);
        h = h.sub(&Series::monomial(C::one(), 0));

        let mut acc: BTreeMap<i64, T> = BTreeMap::new();
        for (&m, vm) in &self.coeffs {
            if m > hout {
                continue;
            }
            let fm = Self::substituted_power(f, &h, &a1, &a1_inv, m, hout)?;
            for (&e, c) in &fm.coeffs {
                if e > hout {
                    continue;
                }
                let term = vm.scale(c);
                if term.is_zero() {
                    continue;
                }
                let cur = acc.remove(&e);
                let sum = match cur {
                    None => term,
                    Some(old) => old + &term,
                };
                if !sum.is_zero() {
                    acc.insert(e, sum);
                }
            }
        }
        Ok(Series {
            coeffs: acc,
            lo: self.lo,
            hi: Some(hout),
        }
        .tightened())
    }

    /// f(x)^m truncated at x^cap.
    fn substituted_power<C: Coeff>(
        f: &Series<C>,
        h: &Series<C>,
        a1: &C,
        a1_inv: &C,
        m: i64,
        cap: i64,
    ) -> Result<Series<C>> {
        if m == 0 {
            return Ok(Series::monomial(C::one(), 0));
        }
        if m > 0 {
            let mut acc = Series::monomial(C::one(), 0);
            for _ in 0..m {
                acc = acc.scale_series(f).truncate(cap);
            }
            return Ok(acc);
        }
        // m < 0: (a1 x)^m * (1 + h)^m, h has support in [1, ..).
        let inner_cap = cap - m; // cap for (1+h)^m before the x^m shift
        let mut acc = Series::monomial(C::one(), 0);
        let mut h_pow = Series::monomial(C::one(), 0);
        let mut j: u32 = 0;
        loop {
            j += 1;
            if i64::from(j) > inner_cap {
                break;
            }
            h_pow = h_pow.scale_series(h).truncate(inner_cap);
            if h_pow.coeffs.is_empty() {
                break;
            }
            let b = C::from_rational(&rational_binomial(&Scalar::from_int(m), j));
            acc = acc.add(&h_pow.scale_all(&b));
        }
        let mut a1_pow = C::one();
        for _ in 0..m.unsigned_abs() {
            a1_pow = a1_pow * a1_inv;
        }
        let _ = a1;
        Ok(acc.scale_all(&a1_pow).shift(m))
    }

    /// Exact equality of two series on the union of what both know, which
    /// must reach at least `need`. Coefficients below both windows are
    /// structural zeros and participate in the comparison.
    pub fn agree_through(&self, other: &Self, need: i64) -> Result<bool> {
        let common_hi = min_opt(self.hi, other.hi);
        if let Some(h) = common_hi {
            if h < need {
                return Err(Error::Truncated {
                    exp: need,
                    window: format!("[{}, {}]", self.lo.min(other.lo), h),
                });
            }
        }
        let lo = self.lo.min(other.lo);
        let upper = match common_hi {
            Some(h) => h,
            None => {
                let a = self.coeffs.keys().next_back().copied().unwrap_or(lo);
                let b = other.coeffs.keys().next_back().copied().unwrap_or(lo);
                a.max(b).max(need)
            }
        };
        for e in lo..=upper {
            if self.coeff(e)? != other.coeff(e)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl<C: Coeff> Series<C> {
    pub fn one() -> Self {
        Series::monomial(C::one(), 0)
    }

    /// The binomial series (1+z)^gamma = sum_m binom(gamma, m) z^m through
    /// z^order. For gamma a nonnegative integer <= order the result is the
    /// exact polynomial.
    pub fn binomial(gamma: &Scalar, order: u32) -> Self {
        let exact_poly = match gamma.to_i64() {
            Some(n) => n >= 0 && n <= i64::from(order),
            None => false,
        };
        let mut coeffs = BTreeMap::new();
        for m in 0..=order {
            let b = rational_binomial(gamma, m);
            if !b.is_zero() {
                coeffs.insert(i64::from(m), C::from_rational(&b));
            }
        }
        Series {
            coeffs,
            lo: 0,
            hi: if exact_poly { None } else { Some(i64::from(order)) },
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.scale_series(other)
    }

    /// Term-wise derivative d/dz.
    pub fn derivative(&self) -> Self {
        let mut coeffs = BTreeMap::new();
        for (&e, c) in &self.coeffs {
            let d = c.clone() * &C::from_int(e);
            if !d.is_zero() {
                coeffs.insert(e - 1, d);
            }
        }
        Series {
            coeffs,
            lo: self.lo - 1,
            hi: self.hi.map(|h| h - 1),
        }
        .tightened()
    }
}

/// The pair (Res_z g(z), Res_x g(f(x)) f'(x)); the change-of-variables
/// formula asserts the two components are equal.
pub fn change_of_var_residues<T, C>(g: &Series<T>, f: &Series<C>) -> Result<(T, T)>
where
    T: Module<C>,
    C: Coeff,
{
    let left = g.residue()?;
    let composed = g.compose(f, 0)?;
    let right = composed.scale_series(&f.derivative()).residue()?;
    Ok((left, right))
}

impl<T: AddGroup> fmt::Display for Series<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            write!(f, "0")?;
        } else {
            let mut first = true;
            for (e, t) in &self.coeffs {
                if !first {
                    write!(f, " + ")?;
                }
                first = false;
                write!(f, "({t})*z^{e}")?;
            }
        }
        write!(f, "  on {}", self.window_string())
    }
}

impl<T: AddGroup> fmt::Debug for Series<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
