use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::PolyError;
use crate::monomial::Monomial;

pub type Rat = BigRational;

/// A point: an exact rational value for each assigned variable.
pub type Point = BTreeMap<String, Rat>;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Render a rational the way reports expect: `a` or `a/b`.
pub fn rat_string(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// An exact multivariate polynomial over the rationals.
///
/// Terms are kept in a map from monomial to nonzero coefficient; all
/// arithmetic is exact. A polynomial is a *local unit* (at the origin) iff
/// its constant term is nonzero; this is the computable stand-in for an
/// invertible germ, and the gap (true germs need not be polynomial) is a
/// documented modeling assumption.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Rat>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        Poly { terms }
    }

    pub fn int(n: i64) -> Self {
        Poly::constant(rat(n))
    }

    pub fn var(name: impl Into<String>) -> Self {
        Poly::from_monomial(Monomial::var(name))
    }

    pub fn from_monomial(m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(m, Rat::one());
        Poly { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rat)>>(iter: I) -> Self {
        let mut p = Poly::zero();
        for (m, c) in iter {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in increasing graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rat {
        self.terms.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn constant_term(&self) -> Rat {
        self.coeff(&Monomial::one())
    }

    /// Local unit at the origin: nonzero constant term.
    pub fn is_local_unit(&self) -> bool {
        !self.constant_term().is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.len() <= 1 && self.terms.keys().all(Monomial::is_one)
    }

    /// Total degree; None for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::total_degree).max()
    }

    /// Minimal total degree among terms (the order of vanishing at the
    /// origin along the degree filtration); None for zero.
    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::total_degree).min()
    }

    /// Leading term under graded lex.
    pub fn leading(&self) -> Option<(&Monomial, &Rat)> {
        self.terms.iter().next_back()
    }

    pub fn variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for m in self.terms.keys() {
            out.extend(m.vars().map(str::to_owned));
        }
        out
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(mm, c)| (mm.mul(m), c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, k)| (m.clone(), k * c))
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut out = Poly::one();
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Exact evaluation; every variable of the polynomial must be assigned.
    pub fn eval(&self, point: &Point) -> Result<Rat, PolyError> {
        let mut total = Rat::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (var, e) in m.iter() {
                let x = point
                    .get(var)
                    .ok_or_else(|| PolyError::MissingVariable(var.to_owned()))?;
                for _ in 0..e {
                    v *= x;
                }
            }
            total += v;
        }
        Ok(total)
    }

    /// Substitute variables by polynomials; variables absent from the map
    /// are left alone.
    pub fn substitute(&self, map: &BTreeMap<String, Poly>) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut term = Poly::constant(c.clone());
            for (var, e) in m.iter() {
                match map.get(var) {
                    Some(p) => term = term.mul(&p.pow(e)),
                    None => term = term.mul(&Poly::from_monomial(Monomial::var(var).pow(e))),
                }
            }
            out = out.add(&term);
        }
        out
    }

    /// Translate coordinates `x -> x + a(x)` for each assigned variable;
    /// with rational shifts this moves a base point to the origin.
    pub fn translate(&self, shift: &Point) -> Poly {
        let map: BTreeMap<String, Poly> = shift
            .iter()
            .map(|(v, a)| {
                (
                    v.clone(),
                    Poly::var(v.clone()).add(&Poly::constant(a.clone())),
                )
            })
            .collect();
        self.substitute(&map)
    }

    pub fn derivative(&self, var: &str) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let e = m.exp(var);
            if e == 0 {
                continue;
            }
            let dm = Monomial::var(var).try_div(m).expect("exp >= 1");
            out.add_term(dm, c * rat(e as i64));
        }
        out
    }

    /// The monomial content: gcd of all monomials (exponentwise min).
    /// Zero polynomial has content 1 by convention.
    pub fn content(&self) -> Monomial {
        let mut it = self.terms.keys();
        let first = match it.next() {
            Some(m) => m.clone(),
            None => return Monomial::one(),
        };
        it.fold(first, |acc, m| acc.gcd(m))
    }

    /// Factor as content * primitive part.
    pub fn content_split(&self) -> (Monomial, Poly) {
        let content = self.content();
        let stripped = Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (content.try_div(m).expect("content divides"), c.clone()))
                .collect(),
        };
        (content, stripped)
    }

    /// The decidable local-unit factorization: `self = m * u` with `u` a
    /// local unit, when it exists. Returns (monomial, unit part).
    pub fn strip_unit(&self) -> Option<(Monomial, Poly)> {
        if self.is_zero() {
            return None;
        }
        let (content, stripped) = self.content_split();
        if stripped.is_local_unit() {
            Some((content, stripped))
        } else {
            None
        }
    }

    /// Exact single-divisor long division under graded lex: Some(quotient)
    /// iff `self = divisor * quotient`. Complete for polynomial
    /// divisibility by a single divisor.
    pub fn divide_exact(&self, divisor: &Poly) -> Result<Option<Poly>, PolyError> {
        let (lead_m, lead_c) = match divisor.leading() {
            Some(l) => l,
            None => return Err(PolyError::ZeroDivisor),
        };
        let mut rem = self.clone();
        let mut quot = Poly::zero();
        while let Some((rm, rc)) = rem.leading() {
            let qm = match lead_m.try_div(rm) {
                Some(q) => q,
                None => return Ok(None),
            };
            let qc = rc / lead_c;
            let t = Poly::from_terms([(qm, qc)]);
            rem = rem.sub(&t.mul(divisor));
            quot = quot.add(&t);
        }
        Ok(Some(quot))
    }

    pub fn divide_by_monomial(&self, m: &Monomial) -> Option<Poly> {
        let mut terms = BTreeMap::new();
        for (mm, c) in &self.terms {
            terms.insert(m.try_div(mm)?, c.clone());
        }
        Some(Poly { terms })
    }
}

/// Outcome of deciding whether `a` divides `b` in the local ring at the
/// origin. A positive answer carries an exact certificate
/// `scale * b = a * quotient` with `scale` a local unit (scale is 1 when the
/// division is exact over the polynomial ring).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LocalDivision {
    Divides { scale: Poly, quotient: Poly },
    DoesNotDivide,
    Undecided,
}

impl LocalDivision {
    pub fn divides(&self) -> bool {
        matches!(self, LocalDivision::Divides { .. })
    }
}

/// Decide `a | b` in the localization at the origin.
///
/// Decidable cases: exact polynomial division (sound for any a), and
/// divisors in the monomial-times-unit class, for which local divisibility
/// is equivalent to the monomial dividing the content of `b`. Outside the
/// class, a vanishing-order comparison can still certify failure; everything
/// else is Undecided rather than guessed.
pub fn local_divides(a: &Poly, b: &Poly) -> Result<LocalDivision, PolyError> {
    if a.is_zero() {
        return Err(PolyError::ZeroDivisor);
    }
    if b.is_zero() {
        return Ok(LocalDivision::Divides {
            scale: Poly::one(),
            quotient: Poly::zero(),
        });
    }
    if let Some(q) = b.divide_exact(a)? {
        return Ok(LocalDivision::Divides {
            scale: Poly::one(),
            quotient: q,
        });
    }
    if let Some((m, u)) = a.strip_unit() {
        // u * b = a * (b/m) when m divides every term of b; for a monomial
        // divisor, local and polynomial divisibility coincide.
        return Ok(match b.divide_by_monomial(&m) {
            Some(q) => LocalDivision::Divides {
                scale: u,
                quotient: q,
            },
            None => LocalDivision::DoesNotDivide,
        });
    }
    if a.min_degree() > b.min_degree() {
        return Ok(LocalDivision::DoesNotDivide);
    }
    Ok(LocalDivision::Undecided)
}

/// Public operation: polynomial divisibility with quotient witness.
pub fn poly_divides(p: &Poly, q: &Poly) -> Result<Option<Poly>, PolyError> {
    if p.is_zero() {
        return Err(PolyError::ZeroDivisor);
    }
    q.divide_exact(p)
}

impl fmt::Display for Poly {
    /// Canonical text rendering: terms in decreasing graded-lex order,
    /// coefficients as `a/b`, e.g. `2*z1^2*z2 - 1/3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if m.is_one() {
                write!(f, "{}", rat_string(&abs))?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{}*{m}", rat_string(&abs))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Poly {
        crate::parse::parse_poly(s).unwrap()
    }

    #[test]
    fn canonical_rendering() {
        let q = Poly::from_terms([
            (Monomial::from_pairs([("z1", 2), ("z2", 1)]), rat(2)),
            (Monomial::one(), rat_frac(-1, 3)),
        ]);
        assert_eq!(q.to_string(), "2*z1^2*z2 - 1/3");
        assert_eq!(Poly::zero().to_string(), "0");
        assert_eq!(Poly::var("x").neg().to_string(), "-x");
        assert_eq!(p("x - y").to_string(), "x - y");
        assert_eq!(p("1/2").to_string(), "1/2");
    }

    #[test]
    fn eval_examples() {
        // zeta1*zeta2 at (2, 3) -> 6
        let q = p("z1*z2");
        let pt: Point = [("z1".to_owned(), rat(2)), ("z2".to_owned(), rat(3))]
            .into_iter()
            .collect();
        assert_eq!(q.eval(&pt).unwrap(), rat(6));
        // 1 + t at t = 0 -> 1
        let q = p("1 + t");
        let pt: Point = [("t".to_owned(), rat(0))].into_iter().collect();
        assert_eq!(q.eval(&pt).unwrap(), rat(1));
        // c11*c22 - c12*c21 on the all-ones matrix -> 0
        let q = p("c11*c22 - c12*c21");
        let pt: Point = ["c11", "c12", "c21", "c22"]
            .into_iter()
            .map(|v| (v.to_owned(), rat(1)))
            .collect();
        assert_eq!(q.eval(&pt).unwrap(), rat(0));
        // missing variable is an error
        let q = p("x + y");
        let pt: Point = [("x".to_owned(), rat(1))].into_iter().collect();
        assert_eq!(
            q.eval(&pt),
            Err(PolyError::MissingVariable("y".to_owned()))
        );
    }

    #[test]
    fn divide_exact_examples() {
        // zeta1 | zeta1*zeta2 + zeta1^2, witness zeta2 + zeta1
        let h = poly_divides(&p("z1"), &p("z1*z2 + z1^2")).unwrap().unwrap();
        assert_eq!(h, p("z2 + z1"));
        // (z1 + z2) | (z1^2 - z2^2), witness verified by multiplying back
        let d = p("z1 + z2");
        let q = p("z1^2 - z2^2");
        let h = poly_divides(&d, &q).unwrap().unwrap();
        assert_eq!(d.mul(&h), q);
        assert_eq!(h, p("z1 - z2"));
        // disjoint variables do not divide
        assert_eq!(poly_divides(&p("z1"), &p("z2")).unwrap(), None);
        // zero divisor is an error
        assert_eq!(
            poly_divides(&Poly::zero(), &p("z1")),
            Err(PolyError::ZeroDivisor)
        );
    }

    #[test]
    fn unit_stripping() {
        let (m, u) = p("z1*z2 + z1*z2*t").strip_unit().unwrap();
        assert_eq!(m, Monomial::from_pairs([("z1", 1), ("z2", 1)]));
        assert_eq!(u, p("1 + t"));
        assert!(p("z1 + z2").strip_unit().is_none());
        assert!(p("3").strip_unit().is_some());
    }

    #[test]
    fn local_division_cases() {
        // unit-scaled witness: (z1*(1+t)) | (z1^2) locally
        let a = p("z1 + z1*t");
        let b = p("z1^2");
        match local_divides(&a, &b).unwrap() {
            LocalDivision::Divides { scale, quotient } => {
                assert_eq!(b.mul(&scale), a.mul(&quotient));
                assert!(scale.is_local_unit());
            }
            other => panic!("expected Divides, got {other:?}"),
        }
        // monomial divisor against non-class dividend
        assert!(local_divides(&p("z1"), &p("z1*z2 + z1^2")).unwrap().divides());
        assert_eq!(
            local_divides(&p("z1"), &p("z2")).unwrap(),
            LocalDivision::DoesNotDivide
        );
        // outside the class both ways and orders equal: undecided
        assert_eq!(
            local_divides(&p("z1 + z2"), &p("z1")).unwrap(),
            LocalDivision::Undecided
        );
        // a non-unit cannot divide a unit (vanishing order)
        assert_eq!(
            local_divides(&p("z1 + z2"), &p("1 + z1")).unwrap(),
            LocalDivision::DoesNotDivide
        );
        assert_eq!(
            local_divides(&p("z1^2 + z2^2"), &p("z1")).unwrap(),
            LocalDivision::DoesNotDivide
        );
    }

    #[test]
    fn derivative_and_translate() {
        assert_eq!(p("z1^2*z2").derivative("z1"), p("2*z1*z2"));
        assert_eq!(p("z1^2*z2").derivative("z2"), p("z1^2"));
        assert_eq!(p("z2").derivative("z1"), Poly::zero());
        let shift: Point = [("x".to_owned(), rat(1))].into_iter().collect();
        assert_eq!(p("x^2").translate(&shift), p("x^2 + 2*x + 1"));
    }
}
