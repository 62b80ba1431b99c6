//! Truncated Laurent series over a finite field.
//!
//! A series is a dense window of coefficients starting at its valuation,
//! together with an absolute precision `P`: the series is known modulo
//! `t^P`. Exact series (finite Laurent polynomials) carry [`EXACT`].
//! Arithmetic propagates precision pessimistically.

use std::fmt;
use std::sync::Arc;

use super::field::FiniteField;
use crate::error::{Error, Result};

/// Absolute precision of an exact series.
pub const EXACT: i64 = i64::MAX;
/// Relative precision used when an exact input must be expanded into an
/// infinite series (inverse of a non-monomial polynomial, say).
pub const DEFAULT_PRECISION: i64 = 64;
/// Ceiling for precision escalation.
pub const PRECISION_CAP: i64 = 4096;

/// Precision escalation schedule: start at `initial`, double up to `cap`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrecisionPolicy {
    pub initial: i64,
    pub cap: i64,
}

impl Default for PrecisionPolicy {
    fn default() -> Self {
        PrecisionPolicy {
            initial: DEFAULT_PRECISION,
            cap: PRECISION_CAP,
        }
    }
}

impl PrecisionPolicy {
    /// The precision ladder `initial, 2·initial, ...` ending at `cap`.
    pub fn ladder(&self) -> Vec<i64> {
        let mut out = Vec::new();
        let mut p = self.initial.clamp(1, self.cap.max(1));
        loop {
            out.push(p);
            if p >= self.cap {
                break;
            }
            p = (p * 2).min(self.cap);
        }
        out
    }
}

#[inline]
fn sat_add(a: i64, b: i64) -> i64 {
    if a == EXACT || b == EXACT {
        EXACT
    } else {
        a.saturating_add(b)
    }
}

#[derive(Clone)]
pub struct LaurentSeries {
    field: Arc<FiniteField>,
    /// Exponent of `coeffs[0]`; meaningless when `coeffs` is empty.
    start: i64,
    /// First and last entries nonzero.
    coeffs: Vec<u32>,
    prec: i64,
}

impl PartialEq for LaurentSeries {
    fn eq(&self, other: &Self) -> bool {
        *self.field == *other.field
            && self.prec == other.prec
            && self.coeffs == other.coeffs
            && (self.coeffs.is_empty() || self.start == other.start)
    }
}
impl Eq for LaurentSeries {}

impl fmt::Debug for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{:?}*t^{}", self.field.digits(c), e)?;
        }
        if first {
            write!(f, "0")?;
        }
        if self.prec != EXACT {
            write!(f, " + O(t^{})", self.prec)?;
        }
        Ok(())
    }
}

impl LaurentSeries {
    /// `Σ coeffs[i] t^(start+i) + O(t^prec)`; coefficients at or beyond
    /// `prec` are dropped.
    pub fn new(field: &Arc<FiniteField>, start: i64, coeffs: Vec<u32>, prec: i64) -> Self {
        let mut s = LaurentSeries {
            field: Arc::clone(field),
            start,
            coeffs,
            prec,
        };
        s.normalize();
        s
    }

    pub fn exact(field: &Arc<FiniteField>, start: i64, coeffs: Vec<u32>) -> Self {
        Self::new(field, start, coeffs, EXACT)
    }

    /// Builds a series from sparse `(exponent, coefficient)` terms. Repeated
    /// exponents are summed.
    pub fn from_terms(field: &Arc<FiniteField>, terms: &[(i64, u32)], prec: i64) -> Self {
        if terms.is_empty() {
            return Self::zero_to(field, prec);
        }
        let lo = terms.iter().map(|t| t.0).min().unwrap();
        let hi = terms.iter().map(|t| t.0).max().unwrap();
        let mut coeffs = vec![0u32; (hi - lo + 1) as usize];
        for &(e, c) in terms {
            let slot = &mut coeffs[(e - lo) as usize];
            *slot = field.add(*slot, c);
        }
        Self::new(field, lo, coeffs, prec)
    }

    pub fn monomial(field: &Arc<FiniteField>, coeff: u32, exponent: i64) -> Self {
        Self::exact(field, exponent, vec![coeff])
    }

    pub fn one(field: &Arc<FiniteField>) -> Self {
        Self::monomial(field, 1, 0)
    }

    /// `O(t^prec)`; with [`EXACT`] this is the exact zero.
    pub fn zero_to(field: &Arc<FiniteField>, prec: i64) -> Self {
        LaurentSeries {
            field: Arc::clone(field),
            start: 0,
            coeffs: Vec::new(),
            prec,
        }
    }

    fn normalize(&mut self) {
        if self.prec != EXACT {
            let keep = (self.prec - self.start).clamp(0, self.coeffs.len() as i64) as usize;
            self.coeffs.truncate(keep);
        }
        let lead = self.coeffs.iter().position(|&c| c != 0);
        match lead {
            None => {
                self.coeffs.clear();
                self.start = 0;
            }
            Some(k) => {
                self.coeffs.drain(..k);
                self.start += k as i64;
                while self.coeffs.last() == Some(&0) {
                    self.coeffs.pop();
                }
            }
        }
    }

    pub fn field(&self) -> &Arc<FiniteField> {
        &self.field
    }

    /// Absolute precision: the series is known modulo `t^P`.
    pub fn absolute_precision(&self) -> i64 {
        self.prec
    }

    /// Number of known terms past the valuation. Errors for a series that is
    /// zero to its precision.
    pub fn relative_precision(&self) -> Result<i64> {
        let v = self.valuation()?;
        Ok(if self.prec == EXACT {
            EXACT
        } else {
            self.prec - v
        })
    }

    pub fn is_exact(&self) -> bool {
        self.prec == EXACT
    }

    /// True when every known coefficient vanishes.
    pub fn is_zero_to_precision(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Exponent of the first nonzero coefficient.
    pub fn valuation(&self) -> Result<i64> {
        if self.coeffs.is_empty() {
            return Err(Error::PrecisionExhausted(if self.prec == EXACT {
                "the zero series has no finite valuation".into()
            } else {
                format!("series vanishes to precision t^{}", self.prec)
            }));
        }
        Ok(self.start)
    }

    /// Lower bound for the valuation: the valuation itself, or the precision
    /// for a series that is zero to precision.
    fn valuation_bound(&self) -> i64 {
        if self.coeffs.is_empty() {
            self.prec
        } else {
            self.start
        }
    }

    pub fn leading_coefficient(&self) -> Option<u32> {
        self.coeffs.first().copied()
    }

    /// Coefficient of `t^e`, or `None` beyond the precision.
    pub fn coeff(&self, e: i64) -> Option<u32> {
        if e >= self.prec {
            return None;
        }
        if self.coeffs.is_empty() || e < self.start {
            return Some(0);
        }
        Some(
            self.coeffs
                .get((e - self.start) as usize)
                .copied()
                .unwrap_or(0),
        )
    }

    /// Nonzero terms as `(exponent, coefficient code)`.
    pub fn terms(&self) -> impl Iterator<Item = (i64, u32)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(move |(i, &c)| (self.start + i as i64, c))
    }

    /// Highest exponent with a stored nonzero coefficient.
    pub fn last_exponent(&self) -> Option<i64> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.start + self.coeffs.len() as i64 - 1)
        }
    }

    pub fn is_monomial(&self) -> bool {
        self.coeffs.len() == 1
    }

    /// Lowers the precision to `min(prec, self.prec)`.
    pub fn truncate(&self, prec: i64) -> Self {
        Self::new(
            &self.field,
            self.start,
            self.coeffs.clone(),
            prec.min(self.prec),
        )
    }

    /// Forgets the error term: the known coefficients become an exact
    /// Laurent polynomial.
    pub fn assume_exact(&self) -> Self {
        LaurentSeries {
            field: Arc::clone(&self.field),
            start: self.start,
            coeffs: self.coeffs.clone(),
            prec: EXACT,
        }
    }

    /// Multiplication by `t^k`.
    pub fn shift(&self, k: i64) -> Self {
        LaurentSeries {
            field: Arc::clone(&self.field),
            start: self.start + k,
            coeffs: self.coeffs.clone(),
            prec: sat_add(self.prec, k),
        }
    }

    pub fn scale(&self, c: u32) -> Self {
        let coeffs = self.coeffs.iter().map(|&x| self.field.mul(x, c)).collect();
        Self::new(&self.field, self.start, coeffs, self.prec)
    }

    fn same_field(&self, other: &Self) -> Result<()> {
        if *self.field == *other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn neg(&self) -> Self {
        let coeffs = self.coeffs.iter().map(|&x| self.field.neg(x)).collect();
        LaurentSeries {
            field: Arc::clone(&self.field),
            start: self.start,
            coeffs,
            prec: self.prec,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        let prec = self.prec.min(other.prec);
        if self.coeffs.is_empty() {
            return Ok(other.truncate(prec));
        }
        if other.coeffs.is_empty() {
            return Ok(self.truncate(prec));
        }
        let lo = self.start.min(other.start);
        let hi =
            (self.start + self.coeffs.len() as i64).max(other.start + other.coeffs.len() as i64);
        let hi = if prec == EXACT { hi } else { hi.min(prec) };
        if hi <= lo {
            return Ok(Self::zero_to(&self.field, prec));
        }
        let mut coeffs = vec![0u32; (hi - lo) as usize];
        for s in [self, other] {
            for (i, &c) in s.coeffs.iter().enumerate() {
                let e = s.start + i as i64;
                if e < hi {
                    let slot = &mut coeffs[(e - lo) as usize];
                    *slot = self.field.add(*slot, c);
                }
            }
        }
        Ok(Self::new(&self.field, lo, coeffs, prec))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        let va = self.valuation_bound();
        let vb = other.valuation_bound();
        let prec = sat_add(va, other.prec).min(sat_add(vb, self.prec));
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Ok(Self::zero_to(&self.field, prec));
        }
        let start = va + vb;
        let full = self.coeffs.len() + other.coeffs.len() - 1;
        let len = if prec == EXACT {
            full
        } else {
            (prec - start).clamp(0, full as i64) as usize
        };
        let coeffs = dense::mul(&self.field, &self.coeffs, &other.coeffs, len);
        Ok(Self::new(&self.field, start, coeffs, prec))
    }

    /// Multiplicative inverse. Relative precision is preserved; inverting an
    /// exact non-monomial expands to [`DEFAULT_PRECISION`] terms.
    pub fn inv(&self) -> Result<Self> {
        let rel = self.relative_precision()?;
        let rel = if rel == EXACT && !self.is_monomial() {
            DEFAULT_PRECISION
        } else {
            rel
        };
        self.inv_to(rel)
    }

    /// Inverse with the given relative precision (capped by the input's).
    pub fn inv_to(&self, rel: i64) -> Result<Self> {
        let v = self.valuation()?;
        let own = self.relative_precision()?;
        if own == EXACT && self.is_monomial() {
            let c = self.field.inv(self.coeffs[0])?;
            return Ok(Self::monomial(&self.field, c, -v));
        }
        let rel = rel.min(own);
        let inv = dense::inv(&self.field, &self.coeffs, rel as usize)?;
        Ok(Self::new(&self.field, -v, inv, sat_add(-v, rel)))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.mul(&other.inv()?)
    }

    /// Integer power; negative exponents go through [`Self::inv`].
    pub fn pow(&self, e: i64) -> Result<Self> {
        if e < 0 {
            return self.inv()?.pow(-e);
        }
        let mut acc = Self::one(&self.field);
        let mut base = self.clone();
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Substitution `t ↦ g(s)`: returns `self(g)` as a series in `s`.
    ///
    /// Requires `v(g) >= 1`. The result is known to absolute precision
    /// `min(P_f · v(g), min_{i ∈ supp f, i ≠ 0} (i · v(g) + relprec(g)))`.
    pub fn compose(&self, g: &Self) -> Result<Self> {
        self.same_field(g)?;
        let w = g.valuation()?;
        if w < 1 {
            return Err(Error::CompositionUndefined(w));
        }
        let field = &self.field;
        if self.coeffs.is_empty() {
            let prec = if self.prec == EXACT {
                EXACT
            } else {
                self.prec.saturating_mul(w)
            };
            return Ok(Self::zero_to(field, prec));
        }
        let f_prec = if self.prec == EXACT {
            EXACT
        } else {
            self.prec.saturating_mul(w)
        };

        if g.is_exact() && g.is_monomial() {
            let c = g.coeffs[0];
            let terms: Vec<(i64, u32)> = self
                .terms()
                .map(|(i, a)| Ok((i * w, field.mul(a, field.pow(c, i)?))))
                .collect::<Result<_>>()?;
            return Ok(Self::from_terms(field, &terms, f_prec));
        }

        let vf = self.start;
        let rel_g = g.relative_precision()?;
        let mut target = f_prec;
        for (i, _) in self.terms() {
            if i != 0 {
                target = target.min(sat_add(i * w, rel_g));
            }
        }
        let last = self.last_exponent().unwrap();
        // Relative length of the window after factoring out s^(vf·w).
        let rel_len: i64 = if target == EXACT {
            if vf < 0 {
                target = vf * w + DEFAULT_PRECISION;
                DEFAULT_PRECISION
            } else {
                // exact polynomial in an exact polynomial: compute everything
                let deg_g = g.coeffs.len() as i64 - 1 + w;
                last * deg_g - vf * w + 1
            }
        } else {
            target - vf * w
        };
        if rel_len <= 0 {
            return Ok(Self::zero_to(field, target));
        }
        let n = rel_len as usize;
        // g = s^w · u with u a unit power series
        let u: Vec<u32> = g.coeffs.iter().copied().take(n).collect();
        let mut h = vec![0u32; n];
        for (i, &c) in u.iter().enumerate() {
            if (w as usize) + i < n {
                h[w as usize + i] = c;
            }
        }
        let span = last - vf;
        let max_j = span.min((rel_len - 1) / w);
        let mut acc = vec![0u32; n];
        for j in (0..=max_j).rev() {
            acc = dense::mul(field, &acc, &h, n);
            acc.resize(n, 0);
            let a = self.coeff(vf + j).unwrap_or(0);
            acc[0] = field.add(acc[0], a);
        }
        let uv = dense::pow(field, &u, vf, n)?;
        let body = dense::mul(field, &uv, &acc, n);
        Ok(Self::new(field, vf * w, body, target))
    }

    /// Formal derivative with respect to the series variable.
    pub fn derivative(&self) -> Self {
        let terms: Vec<(i64, u32)> = self
            .terms()
            .map(|(e, c)| (e - 1, self.field.mul(c, self.field.from_int(e))))
            .collect();
        Self::from_terms(&self.field, &terms, sat_add(self.prec, -1))
    }
}

/// Evaluates `Σ coeffs[k] x^k` by Horner's rule.
pub fn eval_poly(coeffs: &[LaurentSeries], x: &LaurentSeries) -> Result<LaurentSeries> {
    let mut acc = LaurentSeries::zero_to(x.field(), EXACT);
    for c in coeffs.iter().rev() {
        acc = acc.mul(x)?.add(c)?;
    }
    Ok(acc)
}

/// Coefficients of the formal derivative of `Σ coeffs[k] x^k`.
pub fn derive_poly(coeffs: &[LaurentSeries]) -> Vec<LaurentSeries> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c.scale(c.field().from_int(k as i64)))
        .collect()
}

/// Newton iteration for a simple root of a polynomial with series
/// coefficients.
///
/// `x0` must be an approximate root to its own precision, `P'(x0)` must be a
/// unit and `x0` and all coefficients must be integral. Precision doubles
/// each step until `target_prec` (absolute) is reached.
pub fn hensel_lift_root(
    poly: &[LaurentSeries],
    x0: &LaurentSeries,
    target_prec: i64,
) -> Result<LaurentSeries> {
    for c in poly {
        x0.same_field(c)?;
        if c.valuation_bound() < 0 {
            return Err(Error::NotSimpleRoot(
                "polynomial coefficients must be integral".into(),
            ));
        }
    }
    if x0.valuation_bound() < 0 {
        return Err(Error::NotSimpleRoot(
            "starting point must be integral".into(),
        ));
    }
    let dpoly = derive_poly(poly);
    let d0 = eval_poly(&dpoly, x0)?;
    if d0.is_zero_to_precision() || d0.valuation()? != 0 {
        return Err(Error::NotSimpleRoot(
            "derivative at the starting point is not a unit".into(),
        ));
    }
    let r0 = eval_poly(poly, x0)?;
    if !r0.is_zero_to_precision() && r0.valuation()? < x0.absolute_precision() {
        return Err(Error::NotSimpleRoot(format!(
            "starting point is not a root modulo t^{}",
            x0.absolute_precision()
        )));
    }
    if x0.absolute_precision() >= target_prec {
        return Ok(x0.truncate(target_prec));
    }
    let mut x = x0.clone();
    let mut have = x0.absolute_precision().max(1);
    while have < target_prec {
        let want = have.saturating_mul(2).min(target_prec);
        // Integral x and coefficients: P(x + O(t^n)) = P(x) + O(t^n).
        let xe = x.assume_exact().truncate(want);
        let value = eval_poly(poly, &xe)?.truncate(want);
        let slope = eval_poly(&dpoly, &xe.truncate(want - have))?.truncate(want - have);
        let step = value.mul(&slope.inv()?)?;
        let next = xe.sub(&step)?.truncate(want);
        let got = next.absolute_precision();
        if got <= have {
            return Err(Error::PrecisionExhausted(format!(
                "coefficients only determine the root modulo t^{got}"
            )));
        }
        x = next;
        have = got;
    }
    Ok(x)
}

/// Truncated dense power-series arithmetic on coefficient codes.
mod dense {
    use super::FiniteField;
    use crate::error::{Error, Result};

    pub fn mul(f: &FiniteField, a: &[u32], b: &[u32], len: usize) -> Vec<u32> {
        let mut out = vec![0u32; len];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 || i >= len {
                continue;
            }
            for (j, &y) in b.iter().enumerate().take(len - i) {
                if y != 0 {
                    out[i + j] = f.add(out[i + j], f.mul(x, y));
                }
            }
        }
        out
    }

    /// Inverse of a unit power series to `len` terms.
    pub fn inv(f: &FiniteField, a: &[u32], len: usize) -> Result<Vec<u32>> {
        let a0 = *a.first().ok_or(Error::ZeroElement)?;
        let a0_inv = f.inv(a0)?;
        let mut out = vec![0u32; len];
        if len == 0 {
            return Ok(out);
        }
        out[0] = a0_inv;
        for k in 1..len {
            let mut s = 0u32;
            for i in 1..=k.min(a.len() - 1) {
                s = f.add(s, f.mul(a[i], out[k - i]));
            }
            out[k] = f.neg(f.mul(s, a0_inv));
        }
        Ok(out)
    }

    /// `a^e` for a unit power series and any integer `e`.
    pub fn pow(f: &FiniteField, a: &[u32], e: i64, len: usize) -> Result<Vec<u32>> {
        let base = if e < 0 {
            inv(f, a, len)?
        } else {
            a.iter().copied().take(len).collect()
        };
        let mut e = e.unsigned_abs();
        let mut acc = vec![0u32; len];
        if len > 0 {
            acc[0] = 1;
        }
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul(f, &acc, &b, len);
            }
            e >>= 1;
            if e > 0 {
                b = mul(f, &b, &b, len);
            }
        }
        Ok(acc)
    }
}
