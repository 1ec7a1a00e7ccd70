use std::collections::BTreeSet;
use std::fmt;

use crate::monomial::Monomial;
use crate::poly::Poly;

/// A monomial ideal, stored by its reduced (minimal) generating set: no
/// generator divides another. Reduction is idempotent and independent of
/// insertion order because the minimal monomial generators of a monomial
/// ideal are unique.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonIdeal {
    gens: BTreeSet<Monomial>,
}

impl MonIdeal {
    pub fn new<I: IntoIterator<Item = Monomial>>(gens: I) -> Self {
        let raw: BTreeSet<Monomial> = gens.into_iter().collect();
        let reduced = raw
            .iter()
            .filter(|g| !raw.iter().any(|h| h != *g && h.divides(g)))
            .cloned()
            .collect();
        MonIdeal { gens: reduced }
    }

    pub fn unit() -> Self {
        MonIdeal::new([Monomial::one()])
    }

    pub fn generators(&self) -> impl Iterator<Item = &Monomial> {
        self.gens.iter()
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.gens.contains(&Monomial::one())
    }

    /// A monomial ideal is principal at the origin iff one generator
    /// divides every other, i.e. the reduced set is a singleton.
    pub fn local_principal(&self) -> Option<Monomial> {
        if self.gens.len() == 1 {
            self.gens.iter().next().cloned()
        } else {
            None
        }
    }

    pub fn contains_monomial(&self, m: &Monomial) -> bool {
        self.gens.iter().any(|g| g.divides(m))
    }

    /// Intersection of monomial ideals: pairwise lcms, reduced.
    pub fn intersect(&self, other: &MonIdeal) -> MonIdeal {
        let mut out = Vec::new();
        for a in &self.gens {
            for b in &other.gens {
                out.push(a.lcm(b));
            }
        }
        MonIdeal::new(out)
    }

    /// Saturation by a variable: (I : v^inf), generated by the generators
    /// with their v-powers removed.
    pub fn saturate_var(&self, var: &str) -> MonIdeal {
        MonIdeal::new(self.gens.iter().map(|g| g.restrict(|v| v != var)))
    }

    /// All variables appearing in some generator.
    pub fn support(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for g in &self.gens {
            out.extend(g.vars().map(str::to_owned));
        }
        out
    }

    /// Localize at the generic point of the coordinate subspace
    /// {x_s = 0 : s in S}: variables outside S become units and are
    /// stripped from each generator.
    pub fn restrict_to(&self, subspace: &BTreeSet<String>) -> MonIdeal {
        MonIdeal::new(
            self.gens
                .iter()
                .map(|g| g.restrict(|v| subspace.contains(v))),
        )
    }
}

impl fmt::Display for MonIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, g) in self.gens.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, ")")
    }
}

/// An ideal presented by polynomial generators (e.g. a level of a
/// determinantal ladder). Zero generators are dropped.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PolyIdeal {
    gens: Vec<Poly>,
}

/// Outcome of the decidable local-principality test at the origin.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Principality {
    /// Locally principal; carries a generator (zero for the zero ideal).
    Principal(Poly),
    /// Certified not principal at the origin.
    NotPrincipal,
    Undecided,
}

impl PolyIdeal {
    pub fn new<I: IntoIterator<Item = Poly>>(gens: I) -> Self {
        PolyIdeal {
            gens: gens.into_iter().filter(|g| !g.is_zero()).collect(),
        }
    }

    pub fn generators(&self) -> &[Poly] {
        &self.gens
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    /// Strip unit factors from every generator; Some iff every generator is
    /// in the monomial-times-unit class. The result generates the same
    /// ideal in the local ring at the origin.
    pub fn as_monomial(&self) -> Option<MonIdeal> {
        let mut mons = Vec::with_capacity(self.gens.len());
        for g in &self.gens {
            let (m, _) = g.strip_unit()?;
            mons.push(m);
        }
        Some(MonIdeal::new(mons))
    }

    /// Decidable local principality at the origin.
    ///
    /// Single generators are always principal; monomial-times-unit
    /// generating sets reduce to the monomial criterion; otherwise a single
    /// generator polynomially dividing all others still certifies
    /// principality, and anything else is Undecided.
    pub fn local_principality(&self) -> Principality {
        if self.gens.is_empty() {
            return Principality::Principal(Poly::zero());
        }
        if self.gens.len() == 1 {
            return Principality::Principal(self.gens[0].clone());
        }
        if let Some(mon) = self.as_monomial() {
            return match mon.local_principal() {
                Some(m) => {
                    let gen = self
                        .gens
                        .iter()
                        .find(|g| g.strip_unit().map(|(gm, _)| gm == m).unwrap_or(false))
                        .cloned()
                        .unwrap_or_else(|| Poly::from_monomial(m));
                    Principality::Principal(gen)
                }
                None => Principality::NotPrincipal,
            };
        }
        for g in &self.gens {
            if self
                .gens
                .iter()
                .all(|h| g.divide_exact(h).ok().flatten().is_some() || h.is_zero())
            {
                return Principality::Principal(g.clone());
            }
        }
        Principality::Undecided
    }

    /// Translate every generator (used to test principality at a point
    /// other than the origin).
    pub fn translate(&self, shift: &crate::poly::Point) -> PolyIdeal {
        PolyIdeal::new(self.gens.iter().map(|g| g.translate(shift)))
    }
}

impl fmt::Display for PolyIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.gens.is_empty() {
            return write!(f, "(0)");
        }
        write!(f, "(")?;
        for (i, g) in self.gens.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;

    fn m(pairs: &[(&str, u32)]) -> Monomial {
        Monomial::from_pairs(pairs.iter().map(|&(v, e)| (v, e)))
    }

    #[test]
    fn principality_examples() {
        // (x, xy) -> x
        let i = MonIdeal::new([m(&[("x", 1)]), m(&[("x", 1), ("y", 1)])]);
        assert_eq!(i.local_principal(), Some(m(&[("x", 1)])));
        // (x, y) -> none
        let i = MonIdeal::new([m(&[("x", 1)]), m(&[("y", 1)])]);
        assert_eq!(i.local_principal(), None);
        // (x^2 y, x y^2) -> none
        let i = MonIdeal::new([m(&[("x", 2), ("y", 1)]), m(&[("x", 1), ("y", 2)])]);
        assert_eq!(i.local_principal(), None);
    }

    #[test]
    fn reduction_is_stable() {
        let base = MonIdeal::new([m(&[("x", 1)]), m(&[("y", 2)])]);
        // adding a multiple of an existing generator changes nothing
        let bigger = MonIdeal::new([
            m(&[("x", 1)]),
            m(&[("y", 2)]),
            m(&[("x", 1), ("y", 3)]),
            m(&[("x", 4)]),
        ]);
        assert_eq!(base, bigger);
    }

    #[test]
    fn intersection_of_coordinate_ideals() {
        let i12 = MonIdeal::new([m(&[("z1", 1)]), m(&[("z2", 1)])]);
        let i13 = MonIdeal::new([m(&[("z1", 1)]), m(&[("z3", 1)])]);
        let i23 = MonIdeal::new([m(&[("z2", 1)]), m(&[("z3", 1)])]);
        let all = i12.intersect(&i13).intersect(&i23);
        let expect = MonIdeal::new([
            m(&[("z1", 1), ("z2", 1)]),
            m(&[("z1", 1), ("z3", 1)]),
            m(&[("z2", 1), ("z3", 1)]),
        ]);
        assert_eq!(all, expect);
        // membership oracle: every generator lies in each coordinate ideal
        for g in all.generators() {
            assert!(i12.contains_monomial(g));
            assert!(i13.contains_monomial(g));
            assert!(i23.contains_monomial(g));
        }
    }

    #[test]
    fn saturation_strips_variable_powers() {
        let i = MonIdeal::new([m(&[("z1", 2), ("u", 1)]), m(&[("z1", 1), ("z3", 1)])]);
        let s = i.saturate_var("z1");
        assert_eq!(s, MonIdeal::new([m(&[("u", 1)]), m(&[("z3", 1)])]));
        let dead = MonIdeal::new([m(&[("z1", 1)]), m(&[("z3", 1)])]).saturate_var("z1");
        assert!(dead.is_unit());
    }

    #[test]
    fn poly_ideal_principality() {
        let p = |s: &str| parse_poly(s).unwrap();
        // unit coefficients absorbed into generators
        let i = PolyIdeal::new([p("3*z1"), p("5*z2")]);
        assert_eq!(
            i.as_monomial(),
            Some(MonIdeal::new([m(&[("z1", 1)]), m(&[("z2", 1)])]))
        );
        assert_eq!(i.local_principality(), Principality::NotPrincipal);
        // single non-class generator is still principal
        let i = PolyIdeal::new([p("z1*z2 - z1*z1")]);
        assert!(matches!(i.local_principality(), Principality::Principal(_)));
        // zero ideal
        assert_eq!(
            PolyIdeal::new([Poly::zero()]).local_principality(),
            Principality::Principal(Poly::zero())
        );
        // mixed, undecidable set
        let i = PolyIdeal::new([p("z1 + z2"), p("z1 - z2"), p("z1*z2")]);
        assert_eq!(i.local_principality(), Principality::Undecided);
    }
}
