use std::collections::BTreeSet;
use std::sync::Arc;

use itertools::Itertools;

use crate::chart::{rational_rank, Chart};
use crate::error::{ChartError, ComplexError};
use crate::ideal::PolyIdeal;
use crate::matrix::{rat_solve, PolyMatrix};
use crate::poly::{Point, Poly, Rat};
use crate::sample::Sampler;

/// A two-term complex over a chart ring: the matrix of a homomorphism
/// from a free module of rank `cols` to one of rank `rows`. Kernel ranks
/// refer to the source side.
#[derive(Clone, Debug)]
pub struct TwoTermComplex {
    pub chart: Arc<Chart>,
    matrix: PolyMatrix,
}

impl TwoTermComplex {
    pub fn new(chart: Arc<Chart>, rows: Vec<Vec<Poly>>) -> Result<Self, ChartError> {
        Self::from_matrix(chart, PolyMatrix::from_rows(rows))
    }

    pub fn from_matrix(chart: Arc<Chart>, matrix: PolyMatrix) -> Result<Self, ChartError> {
        for e in matrix.entries() {
            for v in e.variables() {
                if !chart.has_var(&v) {
                    return Err(ChartError::UnknownVariable(v));
                }
            }
        }
        Ok(TwoTermComplex { chart, matrix })
    }

    pub fn rows(&self) -> usize {
        self.matrix.rows()
    }

    pub fn cols(&self) -> usize {
        self.matrix.cols()
    }

    pub fn at(&self, r: usize, c: usize) -> &Poly {
        self.matrix.at(r, c)
    }

    pub fn matrix(&self) -> &PolyMatrix {
        &self.matrix
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    /// Base change to a descendant chart: every entry rewritten through the
    /// child's substitution, exactly.
    pub fn pullback(&self, child: &Arc<Chart>) -> Result<TwoTermComplex, ChartError> {
        if !child.is_descendant_of(&self.chart) {
            return Err(ChartError::NotDescendant {
                parent: self.chart.path.clone(),
                child: child.path.clone(),
            });
        }
        let matrix = self
            .matrix
            .map(|p| child.pull_from(&self.chart, p).expect("descendance checked"));
        Ok(TwoTermComplex {
            chart: child.clone(),
            matrix,
        })
    }

    /// All (k+1) x (k+1) minors, expanded exactly, with their row/column
    /// index sets.
    pub fn minors(&self, k: usize) -> Vec<(Vec<usize>, Vec<usize>, Poly)> {
        let size = k + 1;
        if size > self.rows() || size > self.cols() {
            return Vec::new();
        }
        let mut out = Vec::new();
        for rows in (0..self.rows()).combinations(size) {
            for cols in (0..self.cols()).combinations(size) {
                let m = self.matrix.minor(&rows, &cols);
                out.push((rows.clone(), cols, m));
            }
        }
        out
    }

    /// The determinantal ideal ladder I_0 .. I_r, where I_k is generated by
    /// all (k+1)-minors and r = max(rank E, rank F). Levels beyond the
    /// matrix size are zero ideals.
    pub fn determinantal_ideals(&self) -> DetIdealLadder {
        let r = self.rows().max(self.cols());
        let ideals = (0..=r)
            .map(|k| PolyIdeal::new(self.minors(k).into_iter().map(|(_, _, m)| m)))
            .collect();
        DetIdealLadder { ideals }
    }

    pub fn rank_at(&self, point: &Point) -> Result<usize, ComplexError> {
        self.matrix.rank_at(point).map_err(ComplexError::Poly)
    }

    /// Kernel rank on an integral component: cols - (generic matrix rank),
    /// sampled at >= 3 independent points of the component and confirmed to
    /// agree; disagreement (non-generic sampling) is retried once and then
    /// reported.
    pub fn kernel_rank(&self, locus: &Locus, sampler: &mut Sampler) -> Result<usize, ComplexError> {
        let mut last = Vec::new();
        for attempt in 0..2 {
            let mut ranks = Vec::new();
            for _ in 0..3 {
                let pt = locus.sample(&self.chart, sampler)?;
                ranks.push(self.rank_at(&pt)?);
            }
            if ranks.iter().all(|r| *r == ranks[0]) {
                return Ok(self.cols() - ranks[0]);
            }
            if attempt == 1 {
                last = ranks;
            }
        }
        Err(ComplexError::RankDisagreement(last))
    }
}

/// The determinantal ideal ladder; index k holds the (k+1)-minor ideal.
#[derive(Clone, Debug)]
pub struct DetIdealLadder {
    pub ideals: Vec<PolyIdeal>,
}

impl DetIdealLadder {
    pub fn level(&self, k: usize) -> &PolyIdeal {
        &self.ideals[k]
    }

    pub fn len(&self) -> usize {
        self.ideals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ideals.is_empty()
    }
}

/// An integral locus inside a chart (possibly extended by ambient linear
/// coordinates): a coordinate subspace cut further by unit-linear forms.
/// The whole chart is the empty locus.
#[derive(Clone, Debug, Default)]
pub struct Locus {
    pub zero_vars: BTreeSet<String>,
    /// Linear forms in designated pivot variables; each form vanishes on
    /// the locus and is solved exactly for its pivot during sampling.
    pub linear_forms: Vec<(Poly, String)>,
    /// Ambient variables beyond the chart's own (e.g. section coordinates).
    pub extra_vars: Vec<String>,
}

impl Locus {
    pub fn whole_chart() -> Self {
        Locus::default()
    }

    pub fn coordinate_subspace<I, S>(vars: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Locus {
            zero_vars: vars.into_iter().map(Into::into).collect(),
            ..Locus::default()
        }
    }

    /// An exact rational point of the locus: zeroed coordinates, seeded
    /// nonzero values elsewhere, then the linear forms solved exactly for
    /// their pivots (resampling when a pivot coefficient degenerates).
    pub fn sample(&self, chart: &Chart, sampler: &mut Sampler) -> Result<Point, ComplexError> {
        'outer: for _ in 0..32 {
            let mut pt = sampler.point(
                chart
                    .vars
                    .iter()
                    .map(String::as_str)
                    .chain(self.extra_vars.iter().map(String::as_str)),
                &self.zero_vars,
            );
            for (form, pivot) in &self.linear_forms {
                // form is linear in its pivot: solve coeff*pivot + rest = 0
                let coeff = form.derivative(pivot);
                let mut probe = pt.clone();
                probe.insert(pivot.clone(), Rat::from_integer(0.into()));
                let coeff_val = coeff.eval(&probe).map_err(ComplexError::Poly)?;
                if coeff_val == Rat::from_integer(0.into()) {
                    continue 'outer;
                }
                let rest = form.eval(&probe).map_err(ComplexError::Poly)?;
                pt.insert(pivot.clone(), -rest / coeff_val);
            }
            return Ok(pt);
        }
        Err(ComplexError::RankDisagreement(vec![]))
    }
}

/// Given evaluated linear constraint rows over designated columns, produce
/// an exact kernel sample with the free columns at prescribed values.
pub fn kernel_sample(rows: &[Vec<Rat>], free_values: &[Rat]) -> Option<Vec<Rat>> {
    let n = rows.first()?.len();
    let m = rows.to_vec();
    if rational_rank(m.clone()) < rows.len() {
        return None;
    }
    let mut pivot_cols = Vec::new();
    {
        let mut work = m.clone();
        let mut r = 0;
        for c in 0..n {
            if r >= work.len() {
                break;
            }
            if let Some(pr) = (r..work.len()).find(|&i| !work[i][c].is_zero()) {
                work.swap(r, pr);
                let inv = work[r][c].clone();
                for k in 0..n {
                    work[r][k] = &work[r][k] / &inv;
                }
                for i in 0..work.len() {
                    if i != r && !work[i][c].is_zero() {
                        let f = work[i][c].clone();
                        for k in 0..n {
                            let sub = &work[r][k] * &f;
                            work[i][k] = &work[i][k] - &sub;
                        }
                    }
                }
                pivot_cols.push(c);
                r += 1;
            }
        }
    }
    let free_cols: Vec<usize> = (0..n).filter(|c| !pivot_cols.contains(c)).collect();
    let mut x = vec![Rat::from_integer(0.into()); n];
    for (i, c) in free_cols.iter().enumerate() {
        x[*c] = free_values
            .get(i)
            .cloned()
            .unwrap_or_else(|| Rat::from_integer(1.into()));
    }
    let a: Vec<Vec<Rat>> = m
        .iter()
        .map(|row| pivot_cols.iter().map(|&c| row[c].clone()).collect())
        .collect();
    let b: Vec<Rat> = m
        .iter()
        .map(|row| {
            let mut acc = Rat::from_integer(0.into());
            for &c in &free_cols {
                acc += &row[c] * &x[c];
            }
            -acc
        })
        .collect();
    let sol = rat_solve(&a, &b)?;
    for (i, &c) in pivot_cols.iter().enumerate() {
        x[c] = sol[i].clone();
    }
    Some(x)
}
