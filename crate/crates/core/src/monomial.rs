use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

/// A monomial in named variables.
///
/// Canonical sparse form: no variable maps to exponent 0. The ordering is
/// graded lexicographic with variables compared by name, so `z1^2 > z1*z2 >
/// z2^2` and higher total degree always wins.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    exps: BTreeMap<String, u32>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn var(name: impl Into<String>) -> Self {
        Monomial::from_pairs([(name.into(), 1)])
    }

    pub fn from_pairs<I, S>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (S, u32)>,
        S: Into<String>,
    {
        let mut exps = BTreeMap::new();
        for (v, e) in pairs {
            if e > 0 {
                *exps.entry(v.into()).or_insert(0) += e;
            }
        }
        Monomial { exps }
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn exp(&self, var: &str) -> u32 {
        self.exps.get(var).copied().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.exps.values().sum()
    }

    pub fn vars(&self) -> impl Iterator<Item = &str> {
        self.exps.keys().map(|s| s.as_str())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, u32)> {
        self.exps.iter().map(|(v, &e)| (v.as_str(), e))
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut exps = self.exps.clone();
        for (v, e) in &other.exps {
            *exps.entry(v.clone()).or_insert(0) += e;
        }
        Monomial { exps }
    }

    pub fn pow(&self, k: u32) -> Monomial {
        if k == 0 {
            return Monomial::one();
        }
        let exps = self.exps.iter().map(|(v, e)| (v.clone(), e * k)).collect();
        Monomial { exps }
    }

    /// True iff every exponent of `self` is <= the corresponding exponent of `other`.
    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.iter().all(|(v, e)| other.exp(v) >= *e)
    }

    /// `other / self` when `self` divides `other`.
    pub fn try_div(&self, other: &Monomial) -> Option<Monomial> {
        if !self.divides(other) {
            return None;
        }
        let mut exps = BTreeMap::new();
        for (v, e) in &other.exps {
            let q = e - self.exp(v);
            if q > 0 {
                exps.insert(v.clone(), q);
            }
        }
        Some(Monomial { exps })
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let mut exps = BTreeMap::new();
        for (v, e) in &self.exps {
            let m = (*e).min(other.exp(v));
            if m > 0 {
                exps.insert(v.clone(), m);
            }
        }
        Monomial { exps }
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let mut exps = self.exps.clone();
        for (v, e) in &other.exps {
            let entry = exps.entry(v.clone()).or_insert(0);
            *entry = (*entry).max(*e);
        }
        Monomial { exps }
    }

    /// Keep only the exponents of variables for which `keep` returns true.
    pub fn restrict<F: Fn(&str) -> bool>(&self, keep: F) -> Monomial {
        let exps = self
            .exps
            .iter()
            .filter(|(v, _)| keep(v))
            .map(|(v, e)| (v.clone(), *e))
            .collect();
        Monomial { exps }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.total_degree().cmp(&other.total_degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        // Lexicographic on the union of variable names in ascending order;
        // the monomial with the larger exponent at the first difference wins.
        let mut a = self.exps.iter().peekable();
        let mut b = other.exps.iter().peekable();
        loop {
            match (a.peek(), b.peek()) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some((va, ea)), Some((vb, eb))) => match va.cmp(vb) {
                    // The side whose earliest-named variable appears has
                    // positive exponent there while the other has zero.
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal => match ea.cmp(eb) {
                        Ordering::Equal => {
                            a.next();
                            b.next();
                        }
                        ord => return ord,
                    },
                },
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for (v, e) in &self.exps {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}
