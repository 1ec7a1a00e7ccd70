use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::ChartError;
use crate::ideal::MonIdeal;
use crate::monomial::Monomial;
use crate::poly::{Point, Poly, Rat};
use crate::sample::Sampler;

/// An affine coordinate patch in a tree of blowup charts.
///
/// `root_subst` expresses every root variable as a polynomial in this
/// chart's variables; it is the composition of the per-step substitutions
/// along the parent path (cached, and checked by tests). Charts are
/// immutable and shared through `Arc`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chart {
    /// "" for the root; each blowup appends "/" + pivot variable name.
    pub path: String,
    pub vars: Vec<String>,
    /// Variables that are node-smoothing parameters or blowup descendants
    /// of such; the singularity classifier distinguishes these from
    /// unit-deformation variables.
    pub node_vars: BTreeSet<String>,
    pub parent: Option<Arc<Chart>>,
    /// Parent variable -> polynomial in this chart's variables.
    pub step_subst: BTreeMap<String, Poly>,
    /// Root variable -> polynomial in this chart's variables.
    pub root_subst: BTreeMap<String, Poly>,
    /// (divisor tag, local equation variable), accumulated along the path;
    /// ancestors' divisors are re-expressed through their strict/total
    /// branches in this chart's coordinates.
    pub exceptional: Vec<(String, String)>,
    /// Verified, not assumed: coordinate-center charts are always smooth,
    /// monomial-ideal charts only when their toric cone is unimodular. For
    /// a non-smooth chart the substitution is a monomial cover of the
    /// chart, not an isomorphism.
    pub smooth: bool,
}

impl Chart {
    pub fn root<I, S>(vars: I, node_vars: BTreeSet<String>) -> Arc<Chart>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let vars: Vec<String> = vars.into_iter().map(Into::into).collect();
        let root_subst = vars
            .iter()
            .map(|v| (v.clone(), Poly::var(v.clone())))
            .collect();
        Arc::new(Chart {
            path: String::new(),
            vars,
            node_vars,
            parent: None,
            step_subst: BTreeMap::new(),
            root_subst,
            exceptional: Vec::new(),
            smooth: true,
        })
    }

    pub fn dim(&self) -> usize {
        self.vars.len()
    }

    pub fn has_var(&self, v: &str) -> bool {
        self.vars.iter().any(|w| w == v)
    }

    pub fn origin(&self) -> Point {
        self.vars
            .iter()
            .map(|v| (v.clone(), Rat::zero()))
            .collect()
    }

    /// Check that a point assigns exactly this chart's variables.
    pub fn check_point(&self, pt: &Point) -> Result<(), ChartError> {
        for v in pt.keys() {
            if !self.has_var(v) {
                return Err(ChartError::PointOutsideChart(v.clone()));
            }
        }
        for v in &self.vars {
            if !pt.contains_key(v) {
                return Err(ChartError::PointOutsideChart(format!(
                    "missing coordinate `{v}`"
                )));
            }
        }
        Ok(())
    }

    /// Variables cutting exceptional divisors in this chart.
    pub fn exceptional_vars(&self) -> BTreeSet<String> {
        self.exceptional.iter().map(|(_, v)| v.clone()).collect()
    }

    pub fn is_descendant_of(&self, ancestor: &Chart) -> bool {
        let mut cur = Some(self);
        while let Some(c) = cur {
            if c.path == ancestor.path {
                return true;
            }
            cur = c.parent.as_deref();
        }
        false
    }

    /// Rewrite a polynomial in an ancestor chart's coordinates into this
    /// chart's coordinates (composition of the step substitutions).
    pub fn pull_from(&self, ancestor: &Chart, p: &Poly) -> Result<Poly, ChartError> {
        let mut chain = Vec::new();
        let mut cur = self;
        loop {
            if cur.path == ancestor.path {
                break;
            }
            chain.push(&cur.step_subst);
            match cur.parent.as_deref() {
                Some(par) => cur = par,
                None => {
                    return Err(ChartError::NotDescendant {
                        parent: ancestor.path.clone(),
                        child: self.path.clone(),
                    })
                }
            }
        }
        let mut out = p.clone();
        for subst in chain.into_iter().rev() {
            out = out.substitute(subst);
        }
        Ok(out)
    }

    /// All coordinate strata, as the subsets of variables set to zero,
    /// ordered by (size, lex) for determinism.
    pub fn strata(&self) -> Vec<BTreeSet<String>> {
        let n = self.vars.len();
        assert!(n <= 16, "stratum enumeration on a chart of dimension {n}");
        let mut out: Vec<BTreeSet<String>> = (0..(1u32 << n))
            .map(|mask| {
                self.vars
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask & (1 << i) != 0)
                    .map(|(_, v)| v.clone())
                    .collect()
            })
            .collect();
        out.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
        out
    }

    /// One representative point per coordinate stratum: stratum variables
    /// at zero, the rest at seeded nonzero rationals. The full origin is
    /// the last entry (all variables zero).
    pub fn stratum_points(&self, sampler: &mut Sampler) -> Vec<(BTreeSet<String>, Point)> {
        self.strata()
            .into_iter()
            .map(|zeroed| {
                let pt = sampler.point(self.vars.iter().map(String::as_str), &zeroed);
                (zeroed, pt)
            })
            .collect()
    }
}

/// Pull a monomial through a substitution; the result must again be a
/// monomial with coefficient 1 (all engine substitutions are monic
/// monomial maps on monomials).
pub fn pull_monomial(m: &Monomial, subst: &BTreeMap<String, Poly>) -> Result<Monomial, ChartError> {
    let p = Poly::from_monomial(m.clone()).substitute(subst);
    let mut terms = p.terms();
    match (terms.next(), terms.next()) {
        (Some((mono, coeff)), None) if coeff.is_one() => Ok(mono.clone()),
        _ => Err(ChartError::NonMonomialIdeal(p.to_string())),
    }
}

pub fn pull_ideal(ideal: &MonIdeal, chart: &Chart, ancestor: &Chart) -> Result<MonIdeal, ChartError> {
    let mut gens = Vec::new();
    for g in ideal.generators() {
        let pulled = chart.pull_from(ancestor, &Poly::from_monomial(g.clone()))?;
        let mut terms = pulled.terms();
        match (terms.next(), terms.next()) {
            (Some((mono, coeff)), None) if coeff.is_one() => gens.push(mono.clone()),
            _ => return Err(ChartError::NonMonomialIdeal(pulled.to_string())),
        }
    }
    Ok(MonIdeal::new(gens))
}

/// Blow up a chart along the coordinate subspace {x_s = 0 : s in S}.
///
/// One chart per pivot s: the pivot keeps its name and becomes the
/// exceptional equation, and every other center variable t is replaced by
/// the ratio variable `t.s` with t = x_s * t.s. A principal center (|S| =
/// 1) is an isomorphism and returns the chart unchanged.
pub fn blow_up_coordinate_center(
    chart: &Arc<Chart>,
    center: &BTreeSet<String>,
    tag: &str,
) -> Result<Vec<Arc<Chart>>, ChartError> {
    if center.is_empty() {
        return Err(ChartError::EmptyCenter);
    }
    for v in center {
        if !chart.has_var(v) {
            return Err(ChartError::UnknownVariable(v.clone()));
        }
    }
    if center.len() == 1 {
        return Ok(vec![chart.clone()]);
    }
    let mut out = Vec::with_capacity(center.len());
    for pivot in center {
        let mut vars = Vec::with_capacity(chart.vars.len());
        let mut step_subst = BTreeMap::new();
        let mut node_vars = BTreeSet::new();
        for v in &chart.vars {
            if v != pivot && center.contains(v) {
                let ratio = format!("{v}.{pivot}");
                debug_assert!(!chart.has_var(&ratio));
                step_subst.insert(
                    v.clone(),
                    Poly::var(pivot.clone()).mul(&Poly::var(ratio.clone())),
                );
                if chart.node_vars.contains(v) && chart.node_vars.contains(pivot) {
                    node_vars.insert(ratio.clone());
                }
                vars.push(ratio);
            } else {
                step_subst.insert(v.clone(), Poly::var(v.clone()));
                if chart.node_vars.contains(v) {
                    node_vars.insert(v.clone());
                }
                vars.push(v.clone());
            }
        }
        let root_subst = chart
            .root_subst
            .iter()
            .map(|(r, p)| (r.clone(), p.substitute(&step_subst)))
            .collect();
        let mut exceptional: Vec<(String, String)> = Vec::new();
        for (old_tag, old_var) in &chart.exceptional {
            let pulled = step_subst
                .get(old_var)
                .cloned()
                .unwrap_or_else(|| Poly::var(old_var.clone()));
            for v in pulled.variables() {
                if !exceptional.iter().any(|(t, w)| t == old_tag && *w == v) {
                    exceptional.push((old_tag.clone(), v));
                }
            }
        }
        exceptional.push((tag.to_owned(), pivot.clone()));
        out.push(Arc::new(Chart {
            path: format!("{}/{}", chart.path, pivot),
            vars,
            node_vars,
            parent: Some(chart.clone()),
            step_subst,
            root_subst,
            exceptional,
            smooth: true,
        }));
    }
    Ok(out)
}

/// Blow up a chart along a monomial ideal: one toric chart per reduced
/// generator. Each chart's smoothness is verified from the extreme rays of
/// its cone (simplicial and unimodular <=> polynomial chart ring); for a
/// principal ideal the blowup is an isomorphism.
pub fn blow_up_monomial_ideal(
    chart: &Arc<Chart>,
    ideal: &MonIdeal,
) -> Result<Vec<Arc<Chart>>, ChartError> {
    if ideal.is_empty() {
        return Err(ChartError::EmptyCenter);
    }
    for g in ideal.generators() {
        for v in g.vars() {
            if !chart.has_var(v) {
                return Err(ChartError::UnknownVariable(v.to_owned()));
            }
        }
    }
    if ideal.local_principal().is_some() {
        return Ok(vec![chart.clone()]);
    }
    let n = chart.vars.len();
    let exps: Vec<Vec<i64>> = ideal
        .generators()
        .map(|g| chart.vars.iter().map(|v| g.exp(v) as i64).collect())
        .collect();
    let mut out = Vec::new();
    for (j, gj) in exps.iter().enumerate() {
        // Cone of the chart of generator j: the positive orthant cut by
        // <w, e_i - e_j> >= 0 (g_j has minimal valuation).
        let mut constraints: Vec<Vec<i64>> = (0..n)
            .map(|k| {
                let mut row = vec![0i64; n];
                row[k] = 1;
                row
            })
            .collect();
        for (i, gi) in exps.iter().enumerate() {
            if i == j {
                continue;
            }
            constraints.push((0..n).map(|k| gi[k] - gj[k]).collect());
        }
        let rays = extreme_rays(&constraints, n);
        let smooth = rays.len() == n && {
            let det = int_det(&rays);
            det.abs() == BigInt::one()
        };
        // Substitution x_k -> prod_r y_r^{U[r][k]}. For a non-simplicial
        // cone this is only defined on a simplicial refinement; fall back
        // to the first n independent rays and flag the chart non-smooth.
        let use_rays: Vec<Vec<i64>> = if rays.len() == n {
            rays.clone()
        } else {
            independent_subset(&rays, n)
        };
        if use_rays.len() < n {
            // Degenerate cone (should not happen for reduced nonprincipal
            // ideals); skip this generator chart.
            continue;
        }
        // Name new variables: if column k of U is the unit vector e_r then
        // x_k equals y_r exactly and the old name is kept.
        let mut names: Vec<Option<String>> = vec![None; n];
        for k in 0..n {
            let col: Vec<i64> = (0..use_rays.len()).map(|r| use_rays[r][k]).collect();
            if col.iter().sum::<i64>() == 1 && col.iter().all(|&x| x == 0 || x == 1) {
                let r = col.iter().position(|&x| x == 1).unwrap();
                if names[r].is_none() {
                    names[r] = Some(chart.vars[k].clone());
                }
            }
        }
        let mut counter = 1;
        for name in names.iter_mut() {
            if name.is_none() {
                loop {
                    let cand = format!("u{counter}");
                    counter += 1;
                    if !chart.has_var(&cand) {
                        *name = Some(cand);
                        break;
                    }
                }
            }
        }
        let names: Vec<String> = names.into_iter().map(Option::unwrap).collect();
        let mut step_subst = BTreeMap::new();
        let mut node_vars = BTreeSet::new();
        for k in 0..n {
            let mono = Monomial::from_pairs(
                (0..n).filter(|&r| use_rays[r][k] > 0).map(|r| {
                    (names[r].clone(), use_rays[r][k] as u32)
                }),
            );
            step_subst.insert(chart.vars[k].clone(), Poly::from_monomial(mono));
        }
        for (r, name) in names.iter().enumerate() {
            let contributors: Vec<&String> = (0..n)
                .filter(|&k| use_rays[r][k] > 0)
                .map(|k| &chart.vars[k])
                .collect();
            if !contributors.is_empty() && contributors.iter().all(|v| chart.node_vars.contains(*v)) {
                node_vars.insert(name.clone());
            }
        }
        let root_subst: BTreeMap<String, Poly> = chart
            .root_subst
            .iter()
            .map(|(r, p)| (r.clone(), p.substitute(&step_subst)))
            .collect();
        let gen_name = ideal.generators().nth(j).unwrap().to_string();
        let mut exceptional: Vec<(String, String)> = Vec::new();
        for (old_tag, old_var) in &chart.exceptional {
            let pulled = step_subst
                .get(old_var)
                .cloned()
                .unwrap_or_else(|| Poly::var(old_var.clone()));
            for v in pulled.variables() {
                if !exceptional.iter().any(|(t, w)| t == old_tag && *w == v) {
                    exceptional.push((old_tag.clone(), v));
                }
            }
        }
        let pulled_gen = Poly::from_monomial(ideal.generators().nth(j).unwrap().clone())
            .substitute(&step_subst);
        for v in pulled_gen.variables() {
            exceptional.push((format!("E[{gen_name}]"), v));
        }
        out.push(Arc::new(Chart {
            path: format!("{}/{}", chart.path, gen_name),
            vars: names,
            node_vars,
            parent: Some(chart.clone()),
            step_subst,
            root_subst,
            exceptional,
            smooth,
        }));
    }
    Ok(out)
}

/// A tree of charts produced by blowups, with the step log and the leaves.
#[derive(Debug, Clone)]
pub struct BlowupTree {
    pub root: Arc<Chart>,
    pub steps: Vec<BlowupStep>,
    pub leaves: Vec<Arc<Chart>>,
}

#[derive(Debug, Clone)]
pub struct BlowupStep {
    pub parent_path: String,
    pub center: Vec<String>,
    /// (pivot variable, chart) in creation order.
    pub charts: Vec<(String, Arc<Chart>)>,
}

impl BlowupTree {
    pub fn trivial(root: Arc<Chart>) -> Self {
        BlowupTree {
            leaves: vec![root.clone()],
            steps: Vec::new(),
            root,
        }
    }

    pub fn depth(&self) -> usize {
        self.leaves
            .iter()
            .map(|l| l.path.matches('/').count())
            .max()
            .unwrap_or(0)
    }

    fn step_below(&self, path: &str) -> Option<&BlowupStep> {
        self.steps.iter().find(|s| s.parent_path == path)
    }

    /// Lift a root point with nonzero pivot coordinates into the unique
    /// leaf assigned by the first-applicable-branch rule; returns the leaf
    /// and the lifted point. Only defined over coordinate-center steps.
    pub fn lift_point(&self, root_point: &Point) -> Option<(Arc<Chart>, Point)> {
        let mut chart = self.root.clone();
        let mut pt = root_point.clone();
        loop {
            let step = match self.step_below(&chart.path) {
                Some(s) => s,
                None => return Some((chart, pt)),
            };
            let mut advanced = false;
            for (pivot, child) in &step.charts {
                let pv = pt.get(pivot)?;
                if pv.is_zero() {
                    continue;
                }
                let mut next = Point::new();
                for v in &child.vars {
                    if let Some(val) = pt.get(v) {
                        next.insert(v.clone(), val.clone());
                    } else {
                        // ratio variable: find t with subst t = pivot * v
                        let t = child
                            .step_subst
                            .iter()
                            .find(|(_, p)| {
                                p.variables().contains(v)
                                    && p.variables().contains(pivot.as_str())
                            })
                            .map(|(t, _)| t.clone())?;
                        next.insert(v.clone(), pt.get(&t)? / pv);
                    }
                }
                pt = next;
                chart = child.clone();
                advanced = true;
                break;
            }
            if !advanced {
                return None;
            }
        }
    }
}

const PRINCIPALIZE_STEP_CAP: usize = 256;

/// Choose the next blowup center for `principalize`.
///
/// Take the two graded-lex-smallest generators, remove their gcd, and blow
/// up the pair {u, v} with u the maximal-exponent variable of one residual
/// and v of the other (lex tie-breaks). Such a pair is always an
/// inclusion-minimal coordinate subspace on which the ideal fails local
/// principality, and the balanced choice makes the pair degree invariant
/// drop, which a naive smallest-subspace tie-break does not.
pub fn choose_principalization_center(ideal: &MonIdeal) -> Option<BTreeSet<String>> {
    let gens: Vec<&Monomial> = ideal.generators().collect();
    if gens.len() < 2 {
        return None;
    }
    let g1 = gens[0];
    let g2 = gens[1];
    let gcd = g1.gcd(g2);
    let a = gcd.try_div(g1).expect("gcd divides");
    let b = gcd.try_div(g2).expect("gcd divides");
    let pick_max = |m: &Monomial| -> String {
        m.iter()
            .max_by(|(v1, e1), (v2, e2)| e1.cmp(e2).then_with(|| v2.cmp(v1)))
            .map(|(v, _)| v.to_owned())
            .expect("residual of a reduced non-principal pair is nontrivial")
    };
    let mut center = BTreeSet::new();
    center.insert(pick_max(&a));
    center.insert(pick_max(&b));
    debug_assert_eq!(center.len(), 2, "residual supports are disjoint");
    Some(center)
}

/// Principalize a monomial ideal by smooth coordinate-center blowups: the
/// returned tree's leaves all have principal pullback ideal. Centers are
/// chosen deterministically; each step strictly simplifies the restricted
/// generator sets, and a step cap guards termination.
pub fn principalize(root: &Arc<Chart>, ideal: &MonIdeal) -> Result<BlowupTree, ChartError> {
    if ideal.is_empty() {
        return Err(ChartError::EmptyCenter);
    }
    let mut tree = BlowupTree {
        root: root.clone(),
        steps: Vec::new(),
        leaves: Vec::new(),
    };
    let mut work: Vec<(Arc<Chart>, MonIdeal)> = vec![(root.clone(), ideal.clone())];
    while let Some((chart, id)) = work.pop() {
        if id.local_principal().is_some() {
            tree.leaves.push(chart);
            continue;
        }
        if tree.steps.len() >= PRINCIPALIZE_STEP_CAP {
            return Err(ChartError::PrincipalizationOverflow(PRINCIPALIZE_STEP_CAP));
        }
        let center = choose_principalization_center(&id)
            .expect("non-principal reduced monomial ideal has a failing subspace");
        let tag = format!("E{}", tree.steps.len() + 1);
        let charts = blow_up_coordinate_center(&chart, &center, &tag)?;
        let step = BlowupStep {
            parent_path: chart.path.clone(),
            center: center.iter().cloned().collect(),
            charts: center.iter().cloned().zip(charts.iter().cloned()).collect(),
        };
        tree.steps.push(step);
        for child in charts.into_iter().rev() {
            let pulled = pull_ideal(&id, &child, &chart)?;
            work.push((child, pulled));
        }
    }
    tree.leaves.sort_by(|a, b| a.path.cmp(&b.path));
    Ok(tree)
}

// ---- exact integer cone geometry -------------------------------------------

fn big(v: i64) -> BigInt {
    BigInt::from(v)
}

/// Determinant of a square integer matrix (Laplace; matrices here are tiny).
fn int_det(m: &[Vec<i64>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    if n == 1 {
        return big(m[0][0]);
    }
    let mut det = BigInt::zero();
    for (j, head) in m[0].iter().enumerate() {
        if *head == 0 {
            continue;
        }
        let sub: Vec<Vec<i64>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(k, _)| *k != j)
                    .map(|(_, v)| *v)
                    .collect()
            })
            .collect();
        let term = big(*head) * int_det(&sub);
        if j % 2 == 0 {
            det += term;
        } else {
            det -= term;
        }
    }
    det
}

fn int_rank(rows: &[Vec<i64>], n: usize) -> usize {
    let mut m: Vec<Vec<Rat>> = rows
        .iter()
        .map(|r| r.iter().map(|&v| Rat::from_integer(big(v))).collect())
        .collect();
    rat_rank(&mut m, n)
}

fn rat_rank(m: &mut [Vec<Rat>], cols: usize) -> usize {
    let mut rank = 0;
    for c in 0..cols {
        let pivot = (rank..m.len()).find(|&r| !m[r][c].is_zero());
        let Some(pr) = pivot else { continue };
        m.swap(rank, pr);
        let inv = m[rank][c].clone();
        for r in 0..m.len() {
            if r != rank && !m[r][c].is_zero() {
                let factor = &m[r][c] / &inv;
                for k in 0..cols {
                    let sub = &m[rank][k] * &factor;
                    m[r][k] = &m[r][k] - &sub;
                }
            }
        }
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}

/// One-dimensional kernel of a set of integer rows, as a primitive integer
/// vector, when the rank is exactly n-1.
fn kernel_direction(rows: &[Vec<i64>], n: usize) -> Option<Vec<i64>> {
    let mut m: Vec<Vec<Rat>> = rows
        .iter()
        .map(|r| r.iter().map(|&v| Rat::from_integer(big(v))).collect())
        .collect();
    // Row-reduce and extract the single free column.
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut rank = 0;
    for c in 0..n {
        let pr = (rank..m.len()).find(|&r| !m[r][c].is_zero());
        let Some(pr) = pr else { continue };
        m.swap(rank, pr);
        let inv = m[rank][c].clone();
        for k in 0..n {
            m[rank][k] = &m[rank][k] / &inv;
        }
        for r in 0..m.len() {
            if r != rank && !m[r][c].is_zero() {
                let factor = m[r][c].clone();
                for k in 0..n {
                    let sub = &m[rank][k] * &factor;
                    m[r][k] = &m[r][k] - &sub;
                }
            }
        }
        pivots.push((rank, c));
        rank += 1;
    }
    if rank != n.checked_sub(1)? {
        return None;
    }
    let pivot_cols: BTreeSet<usize> = pivots.iter().map(|&(_, c)| c).collect();
    let free = (0..n).find(|c| !pivot_cols.contains(c))?;
    let mut v = vec![Rat::zero(); n];
    v[free] = Rat::one();
    for &(r, c) in &pivots {
        v[c] = -m[r][free].clone();
    }
    // Scale to a primitive integer vector.
    let mut denom_lcm = BigInt::one();
    for x in &v {
        denom_lcm = denom_lcm.lcm(x.denom());
    }
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&denom_lcm / x.denom())).collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    if g.is_zero() {
        return None;
    }
    let prim: Vec<i64> = ints
        .iter()
        .map(|x| {
            let q = x / &g;
            i64::try_from(&q).expect("cone ray coordinate fits i64")
        })
        .collect();
    Some(prim)
}

/// Extreme rays of the cone {w : A w >= 0}, as primitive integer vectors,
/// sorted for determinism.
fn extreme_rays(constraints: &[Vec<i64>], n: usize) -> Vec<Vec<i64>> {
    let mut rays: Vec<Vec<i64>> = Vec::new();
    if n == 0 {
        return rays;
    }
    let idx: Vec<usize> = (0..constraints.len()).collect();
    for subset in subsets_of_size(&idx, n.saturating_sub(1)) {
        let rows: Vec<Vec<i64>> = subset.iter().map(|&i| constraints[i].clone()).collect();
        let Some(dir) = kernel_direction(&rows, n) else {
            continue;
        };
        for cand in [dir.clone(), dir.iter().map(|v| -v).collect::<Vec<i64>>()] {
            if constraints
                .iter()
                .all(|c| c.iter().zip(&cand).map(|(a, b)| a * b).sum::<i64>() >= 0)
            {
                // Extremality: tight constraints must have rank n-1.
                let tight: Vec<Vec<i64>> = constraints
                    .iter()
                    .filter(|c| c.iter().zip(&cand).map(|(a, b)| a * b).sum::<i64>() == 0)
                    .cloned()
                    .collect();
                if int_rank(&tight, n) == n - 1 && !rays.contains(&cand) {
                    rays.push(cand);
                }
            }
        }
    }
    rays.sort();
    rays
}

fn independent_subset(rays: &[Vec<i64>], n: usize) -> Vec<Vec<i64>> {
    let mut chosen: Vec<Vec<i64>> = Vec::new();
    for r in rays {
        let mut trial = chosen.clone();
        trial.push(r.clone());
        if int_rank(&trial, n) == trial.len() {
            chosen = trial;
            if chosen.len() == n {
                break;
            }
        }
    }
    chosen
}

fn subsets_of_size(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut stack: Vec<(usize, Vec<usize>)> = vec![(0, Vec::new())];
    while let Some((start, cur)) = stack.pop() {
        if cur.len() == k {
            out.push(cur);
            continue;
        }
        for i in start..items.len() {
            let mut next = cur.clone();
            next.push(items[i]);
            stack.push((i + 1, next));
        }
    }
    out.sort();
    out
}

/// Exact rank of a rational matrix (used by rank sampling and Jacobians).
pub fn rational_rank(rows: Vec<Vec<Rat>>) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let cols = rows[0].len();
    let mut m = rows;
    rat_rank(&mut m, cols)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    fn m(pairs: &[(&str, u32)]) -> Monomial {
        Monomial::from_pairs(pairs.iter().map(|&(v, e)| (v, e)))
    }

    fn root2() -> Arc<Chart> {
        Chart::root(["x", "y"], ["x", "y"].iter().map(|s| s.to_string()).collect())
    }

    fn root3() -> Arc<Chart> {
        Chart::root(
            ["x", "y", "z"],
            ["x", "y", "z"].iter().map(|s| s.to_string()).collect(),
        )
    }

    #[test]
    fn coordinate_blowup_of_plane_origin() {
        let root = root2();
        let center: BTreeSet<String> = ["x", "y"].iter().map(|s| s.to_string()).collect();
        let charts = blow_up_coordinate_center(&root, &center, "E1").unwrap();
        assert_eq!(charts.len(), 2);
        let cx = &charts[0];
        assert_eq!(cx.path, "/x");
        assert_eq!(
            cx.root_subst.get("y").unwrap(),
            &Poly::var("x").mul(&Poly::var("y.x"))
        );
        assert_eq!(cx.root_subst.get("x").unwrap(), &Poly::var("x"));
        assert!(cx.smooth);
        assert_eq!(cx.exceptional, vec![("E1".to_owned(), "x".to_owned())]);
        let cy = &charts[1];
        assert_eq!(
            cy.root_subst.get("x").unwrap(),
            &Poly::var("y").mul(&Poly::var("x.y"))
        );
    }

    #[test]
    fn coordinate_blowup_leaves_other_vars_alone() {
        let root = root3();
        let center: BTreeSet<String> = ["x", "y"].iter().map(|s| s.to_string()).collect();
        let charts = blow_up_coordinate_center(&root, &center, "E1").unwrap();
        assert_eq!(charts.len(), 2);
        assert_eq!(charts[0].root_subst.get("z").unwrap(), &Poly::var("z"));
    }

    #[test]
    fn principal_center_is_identity() {
        let root = root2();
        let center: BTreeSet<String> = ["x"].iter().map(|s| s.to_string()).collect();
        let charts = blow_up_coordinate_center(&root, &center, "E1").unwrap();
        assert_eq!(charts.len(), 1);
        assert_eq!(charts[0].path, "");
    }

    #[test]
    fn unknown_variable_is_rejected() {
        let root = root2();
        let center: BTreeSet<String> = ["w"].iter().map(|s| s.to_string()).collect();
        assert_eq!(
            blow_up_coordinate_center(&root, &center, "E1"),
            Err(ChartError::UnknownVariable("w".to_owned()))
        );
    }

    #[test]
    fn monomial_blowup_of_two_variables() {
        let root = root2();
        let ideal = MonIdeal::new([m(&[("x", 1)]), m(&[("y", 1)])]);
        let charts = blow_up_monomial_ideal(&root, &ideal).unwrap();
        assert_eq!(charts.len(), 2);
        for chart in &charts {
            assert!(chart.smooth);
            let pulled = pull_ideal(&ideal, chart, &root).unwrap();
            assert!(pulled.local_principal().is_some());
        }
        // pullback ideals are (x) resp. (y); charts follow generator order
        // (ascending graded lex), so the y-chart comes first.
        let gens: Vec<String> = charts
            .iter()
            .map(|c| {
                pull_ideal(&ideal, c, &root)
                    .unwrap()
                    .local_principal()
                    .unwrap()
                    .to_string()
            })
            .collect();
        assert_eq!(gens, vec!["y".to_owned(), "x".to_owned()]);
    }

    #[test]
    fn monomial_blowup_principal_is_identity() {
        let root = root2();
        let ideal = MonIdeal::new([m(&[("x", 1)])]);
        let charts = blow_up_monomial_ideal(&root, &ideal).unwrap();
        assert_eq!(charts.len(), 1);
        assert_eq!(charts[0].path, "");
    }

    #[test]
    fn monomial_blowup_of_three_variables() {
        let root = root3();
        let ideal = MonIdeal::new([m(&[("x", 1)]), m(&[("y", 1)]), m(&[("z", 1)])]);
        let charts = blow_up_monomial_ideal(&root, &ideal).unwrap();
        assert_eq!(charts.len(), 3);
        for chart in &charts {
            assert!(chart.smooth);
            let pulled = pull_ideal(&ideal, chart, &root).unwrap();
            assert!(pulled.local_principal().is_some(), "chart {}", chart.path);
        }
        // in the x-chart the generators become x, x*u, x*v
        let cx = charts
            .iter()
            .find(|c| {
                pull_ideal(&ideal, c, &root)
                    .unwrap()
                    .local_principal()
                    .unwrap()
                    .to_string()
                    == "x"
            })
            .unwrap();
        let gy = cx.root_subst.get("y").unwrap();
        let gz = cx.root_subst.get("z").unwrap();
        assert_eq!(gy.content().exp("x"), 1);
        assert_eq!(gz.content().exp("x"), 1);
    }

    #[test]
    fn monomial_blowup_detects_singular_chart() {
        let root = root3();
        // Bl_(xy, xz, yz) has singular generator charts.
        let ideal = MonIdeal::new([
            m(&[("x", 1), ("y", 1)]),
            m(&[("x", 1), ("z", 1)]),
            m(&[("y", 1), ("z", 1)]),
        ]);
        let charts = blow_up_monomial_ideal(&root, &ideal).unwrap();
        assert_eq!(charts.len(), 3);
        assert!(charts.iter().all(|c| !c.smooth));
    }

    #[test]
    fn weighted_blowup_chart_is_smooth() {
        let root = root2();
        let ideal = MonIdeal::new([m(&[("x", 2)]), m(&[("y", 1)])]);
        let charts = blow_up_monimal_ok(&root, &ideal);
        for chart in &charts {
            let pulled = pull_ideal(&ideal, chart, &root).unwrap();
            assert!(pulled.local_principal().is_some(), "chart {}", chart.path);
        }
    }

    fn blow_up_monimal_ok(root: &Arc<Chart>, ideal: &MonIdeal) -> Vec<Arc<Chart>> {
        blow_up_monomial_ideal(root, ideal).unwrap()
    }

    #[test]
    fn principalize_examples() {
        let root = root2();
        // (x, y): one step, two leaves
        let i = MonIdeal::new([m(&[("x", 1)]), m(&[("y", 1)])]);
        let tree = principalize(&root, &i).unwrap();
        assert_eq!(tree.steps.len(), 1);
        assert_eq!(tree.leaves.len(), 2);
        // principal input: root only
        let i = MonIdeal::new([m(&[("x", 1), ("y", 2)])]);
        let tree = principalize(&root, &i).unwrap();
        assert!(tree.steps.is_empty());
        assert_eq!(tree.leaves.len(), 1);
        assert_eq!(tree.leaves[0].path, "");
        // (xy, xz, yz): depth <= 3, all leaves principal (checked by the
        // exhaustive substitution oracle below)
        let root = root3();
        let i = MonIdeal::new([
            m(&[("x", 1), ("y", 1)]),
            m(&[("x", 1), ("z", 1)]),
            m(&[("y", 1), ("z", 1)]),
        ]);
        let tree = principalize(&root, &i).unwrap();
        assert!(tree.depth() <= 3, "depth {}", tree.depth());
        for leaf in &tree.leaves {
            let pulled = pull_ideal(&i, leaf, &root).unwrap();
            assert!(
                pulled.local_principal().is_some(),
                "leaf {} not principal: {pulled}",
                leaf.path
            );
        }
    }

    #[test]
    fn substitution_composition_is_cached_correctly() {
        let root = root3();
        let i = MonIdeal::new([
            m(&[("x", 1), ("y", 1)]),
            m(&[("x", 1), ("z", 1)]),
            m(&[("y", 1), ("z", 1)]),
        ]);
        let tree = principalize(&root, &i).unwrap();
        for leaf in &tree.leaves {
            for (r, cached) in &leaf.root_subst {
                let composed = leaf.pull_from(&root, &Poly::var(r.clone())).unwrap();
                assert_eq!(&composed, cached, "leaf {} var {r}", leaf.path);
            }
        }
    }

    #[test]
    fn coverage_points_lift_uniquely_and_compose_back() {
        let root = root3();
        let i = MonIdeal::new([
            m(&[("x", 1), ("y", 1)]),
            m(&[("x", 1), ("z", 1)]),
            m(&[("y", 1), ("z", 1)]),
        ]);
        let tree = principalize(&root, &i).unwrap();
        let mut sampler = Sampler::new(2024);
        for _ in 0..100 {
            let pt: Point = root
                .vars
                .iter()
                .map(|v| (v.clone(), sampler.rat_nonzero()))
                .collect();
            let (leaf, lifted) = tree.lift_point(&pt).expect("lift exists");
            // composing the leaf substitution at the lifted point recovers
            // the root point exactly
            for (rv, p) in &leaf.root_subst {
                assert_eq!(&p.eval(&lifted).unwrap(), pt.get(rv).unwrap());
            }
        }
    }

    #[test]
    fn stratum_enumeration() {
        let root = root2();
        let strata = root.strata();
        assert_eq!(strata.len(), 4);
        assert!(strata[0].is_empty());
        assert_eq!(strata[3].len(), 2);
        let mut s = Sampler::new(1);
        let pts = root.stratum_points(&mut s);
        assert_eq!(pts.len(), 4);
        for (zeroed, pt) in &pts {
            for v in &root.vars {
                let val = pt.get(v).unwrap();
                assert_eq!(zeroed.contains(v), val.is_zero());
            }
        }
    }

    #[test]
    fn enumerated_family_principalizes() {
        // Monomial ideals in <= 4 variables with exponents <= 2: a
        // deterministic enumerated family of generator pairs and triples.
        let vars = ["x", "y", "z", "w"];
        let mut monos = Vec::new();
        for mask in 1u32..81 {
            // base-3 encode exponents over 4 variables
            let mut e = Vec::new();
            let mut v = mask;
            for _ in 0..4 {
                e.push(v % 3);
                v /= 3;
            }
            if e.iter().all(|&x| x == 0) {
                continue;
            }
            let mono = Monomial::from_pairs(
                vars.iter()
                    .zip(&e)
                    .filter(|(_, &x)| x > 0)
                    .map(|(v, &x)| (v.to_string(), x)),
            );
            if mono.total_degree() >= 1 && !monos.contains(&mono) {
                monos.push(mono);
            }
        }
        monos.sort();
        let root = Chart::root(vars, vars.iter().map(|s| s.to_string()).collect());
        let mut checked = 0;
        for i in (0..monos.len()).step_by(7) {
            for j in (i + 1..monos.len()).step_by(11) {
                let ideal = MonIdeal::new([monos[i].clone(), monos[j].clone()]);
                let tree = principalize(&root, &ideal)
                    .unwrap_or_else(|e| panic!("ideal {ideal}: {e}"));
                for leaf in &tree.leaves {
                    let pulled = pull_ideal(&ideal, leaf, &root).unwrap();
                    assert!(
                        pulled.local_principal().is_some(),
                        "ideal {ideal} leaf {}",
                        leaf.path
                    );
                }
                checked += 1;
            }
        }
        assert!(checked > 30, "family too small: {checked}");
    }

    #[test]
    fn extreme_rays_of_the_quadrant() {
        let rays = extreme_rays(&[vec![1, 0], vec![0, 1]], 2);
        assert_eq!(rays, vec![vec![0, 1], vec![1, 0]]);
        let det = int_det(&rays);
        assert_eq!(det, BigInt::from(-1));
    }

    #[test]
    fn lift_point_simple_blowup() {
        let root = root2();
        let center: BTreeSet<String> = ["x", "y"].iter().map(|s| s.to_string()).collect();
        let charts = blow_up_coordinate_center(&root, &center, "E1").unwrap();
        let tree = BlowupTree {
            root: root.clone(),
            steps: vec![BlowupStep {
                parent_path: String::new(),
                center: vec!["x".into(), "y".into()],
                charts: vec![
                    ("x".to_owned(), charts[0].clone()),
                    ("y".to_owned(), charts[1].clone()),
                ],
            }],
            leaves: charts.clone(),
        };
        let pt: Point = [("x".to_owned(), rat(2)), ("y".to_owned(), rat(6))]
            .into_iter()
            .collect();
        let (leaf, lifted) = tree.lift_point(&pt).unwrap();
        assert_eq!(leaf.path, "/x");
        assert_eq!(lifted.get("y.x").unwrap(), &rat(3));
    }
}

