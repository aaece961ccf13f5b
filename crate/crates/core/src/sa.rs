//! The P3-covering relaxation, its one-round Sherali-Adams lift, and an exact
//! rational simplex to solve them.

use std::fmt;
use std::fmt::Write as _;

use num_traits::{One, Signed, Zero};

use crate::cost::{ratio, CostFn, Rational};
use crate::error::{Error, Result};
use crate::graph::{Graph, P3};
use crate::localratio::cluster_vd_exact;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    Singleton(usize),
    /// Always stored with the smaller vertex first.
    Pair(usize, usize),
}

impl Var {
    pub fn pair(u: usize, v: usize) -> Var {
        Var::Pair(u.min(v), u.max(v))
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::Singleton(v) => write!(f, "x{v}"),
            Var::Pair(u, v) => write!(f, "y{u}_{v}"),
        }
    }
}

/// Where a row comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Origin {
    /// `x_a + x_mid + x_b >= 1`.
    Cover(P3),
    /// The covering row lifted by `1 - x_pivot`; its pair terms join the pivot
    /// to the other two vertices.
    Lifted { p3: P3, pivot: usize },
    /// The covering row lifted by `x_z`.
    TimesVertex { p3: P3, z: usize },
    /// The covering row lifted by `1 - x_z`.
    TimesComplement { p3: P3, z: usize },
    /// `-x_v >= -1`.
    Upper(usize),
    /// `x_v >= 0`.
    Lower(usize),
    /// `x_v - x_vu >= 0`.
    PairBelow { v: usize, u: usize },
    /// `x_uv >= 0`.
    PairNonneg(usize, usize),
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Origin::Cover(p) => write!(f, "cover[{p}]"),
            Origin::Lifted { p3, pivot } => write!(f, "lift1[{p3};{pivot}]"),
            Origin::TimesVertex { p3, z } => write!(f, "lift2[{p3};{z}]"),
            Origin::TimesComplement { p3, z } => write!(f, "lift3[{p3};{z}]"),
            Origin::Upper(v) => write!(f, "upper[{v}]"),
            Origin::Lower(v) => write!(f, "lower[{v}]"),
            Origin::PairBelow { v, u } => write!(f, "below[{v};{u}]"),
            Origin::PairNonneg(u, v) => write!(f, "nonneg[{u},{v}]"),
        }
    }
}

/// `Σ coeff · var >= rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Row {
    pub coeffs: Vec<(usize, Rational)>,
    pub rhs: Rational,
    pub origin: Origin,
}

impl Row {
    pub fn lhs(&self, x: &[Rational]) -> Rational {
        self.coeffs.iter().map(|(j, a)| a * &x[*j]).sum()
    }

    pub fn holds(&self, x: &[Rational]) -> bool {
        self.lhs(x) >= self.rhs
    }
}

/// Which pivots get a lifted covering row for each P3.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum LiftedRows {
    /// One row per vertex of the P3.
    #[default]
    EveryPivot,
    /// Only the middle vertex, so the pair terms are the two path edges.
    MiddleOnly,
}

/// Variables `0..n` are the singletons; pair variables follow in
/// lexicographic order when the lift is built.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearProgram {
    pub n: usize,
    pub vars: Vec<Var>,
    pub rows: Vec<Row>,
}

impl LinearProgram {
    pub fn var_index(&self, var: Var) -> Option<usize> {
        match var {
            Var::Singleton(v) => (v < self.n).then_some(v),
            Var::Pair(u, v) => {
                if u >= v || v >= self.n || self.vars.len() == self.n {
                    return None;
                }
                // Pairs (u, v) with u < v, listed row by row.
                let before = u * self.n - u * (u + 1) / 2;
                Some(self.n + before + (v - u - 1))
            }
        }
    }

    /// The cost vector over all variables: `c` on singletons, zero on pairs.
    pub fn objective(&self, c: &CostFn) -> Vec<Rational> {
        let mut obj = vec![Rational::zero(); self.vars.len()];
        obj[..self.n].clone_from_slice(c.values());
        obj
    }

    pub fn first_violation(&self, x: &[Rational]) -> Option<&Row> {
        self.rows.iter().find(|r| !r.holds(x))
    }

    /// CPLEX-style text. Coefficients and bounds are exact `p/q` values.
    pub fn to_lp_text(&self, c: &CostFn) -> String {
        let mut s = String::from("Minimize\n obj:");
        let obj = self.objective(c);
        let mut any = false;
        for (j, a) in obj.iter().enumerate() {
            if !a.is_zero() {
                write_term(&mut s, a, &self.vars[j], !any);
                any = true;
            }
        }
        if !any {
            s.push_str(" 0 x0");
        }
        s.push_str("\nSubject To\n");
        for (i, row) in self.rows.iter().enumerate() {
            let _ = write!(s, " r{i}:");
            for (k, (j, a)) in row.coeffs.iter().enumerate() {
                write_term(&mut s, a, &self.vars[*j], k == 0);
            }
            let _ = writeln!(s, " >= {} \\ {}", row.rhs, row.origin);
        }
        s.push_str("Bounds\n");
        for v in &self.vars {
            let _ = writeln!(s, " {v} >= 0");
        }
        s.push_str("End\n");
        s
    }
}

fn write_term(s: &mut String, a: &Rational, var: &Var, first: bool) {
    let sign = match (a.is_negative(), first) {
        (true, _) => " - ",
        (false, true) => " ",
        (false, false) => " + ",
    };
    let _ = write!(s, "{sign}{} {var}", a.abs());
}

pub fn build_sa(g: &Graph, r: u8) -> Result<LinearProgram> {
    build_sa_with(g, r, LiftedRows::default())
}

/// Builds the covering relaxation (`r = 0`) or its one-round lift (`r = 1`).
pub fn build_sa_with(g: &Graph, r: u8, lifted: LiftedRows) -> Result<LinearProgram> {
    let n = g.n();
    let p3s = g.all_p3s();
    let mut vars: Vec<Var> = (0..n).map(Var::Singleton).collect();
    let mut rows = Vec::new();
    let one = Rational::one;
    let neg = || -Rational::one();
    match r {
        0 => {
            for p in &p3s {
                let coeffs = p.vertices().iter().map(|&v| (v, one())).collect();
                rows.push(Row { coeffs, rhs: one(), origin: Origin::Cover(*p) });
            }
            for v in 0..n {
                rows.push(Row { coeffs: vec![(v, one())], rhs: Rational::zero(), origin: Origin::Lower(v) });
                rows.push(Row { coeffs: vec![(v, neg())], rhs: neg(), origin: Origin::Upper(v) });
            }
        }
        1 => {
            for u in 0..n {
                for v in u + 1..n {
                    vars.push(Var::Pair(u, v));
                }
            }
            let mut lp = LinearProgram { n, vars, rows: Vec::new() };
            let pv = |lp: &LinearProgram, u: usize, v: usize| lp.var_index(Var::pair(u, v)).expect("pair exists");
            for p in &p3s {
                let vs = p.vertices();
                let pivots: Vec<usize> = match lifted {
                    LiftedRows::EveryPivot => vs.to_vec(),
                    LiftedRows::MiddleOnly => vec![p.mid],
                };
                for pivot in pivots {
                    let mut coeffs: Vec<(usize, Rational)> = vs.iter().map(|&v| (v, one())).collect();
                    coeffs.extend(vs.iter().filter(|&&v| v != pivot).map(|&v| (pv(&lp, pivot, v), neg())));
                    rows.push(Row { coeffs, rhs: one(), origin: Origin::Lifted { p3: *p, pivot } });
                }
                for z in (0..n).filter(|z| !vs.contains(z)) {
                    let mut coeffs: Vec<(usize, Rational)> = vs.iter().map(|&v| (pv(&lp, v, z), one())).collect();
                    coeffs.push((z, neg()));
                    rows.push(Row { coeffs, rhs: Rational::zero(), origin: Origin::TimesVertex { p3: *p, z } });
                    let mut coeffs: Vec<(usize, Rational)> = vs.iter().map(|&v| (v, one())).collect();
                    coeffs.push((z, one()));
                    coeffs.extend(vs.iter().map(|&v| (pv(&lp, v, z), neg())));
                    rows.push(Row { coeffs, rhs: one(), origin: Origin::TimesComplement { p3: *p, z } });
                }
            }
            for v in 0..n {
                rows.push(Row { coeffs: vec![(v, neg())], rhs: neg(), origin: Origin::Upper(v) });
            }
            for v in 0..n {
                for u in (0..n).filter(|&u| u != v) {
                    rows.push(Row {
                        coeffs: vec![(v, one()), (pv(&lp, v, u), neg())],
                        rhs: Rational::zero(),
                        origin: Origin::PairBelow { v, u },
                    });
                }
            }
            for u in 0..n {
                for v in u + 1..n {
                    rows.push(Row {
                        coeffs: vec![(pv(&lp, u, v), one())],
                        rhs: Rational::zero(),
                        origin: Origin::PairNonneg(u, v),
                    });
                }
            }
            lp.rows = rows;
            return Ok(lp);
        }
        _ => return Err(Error::contract(format!("only r = 0 and r = 1 are supported, got {r}"))),
    }
    Ok(LinearProgram { n, vars, rows })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpSolution {
    pub status: LpStatus,
    /// One value per variable of the program.
    pub values: Vec<Rational>,
    pub objective: Rational,
    /// One multiplier per row, proving optimality.
    pub duals: Vec<Rational>,
}

impl LpSolution {
    pub fn singleton(&self, v: usize) -> &Rational {
        &self.values[v]
    }
}

/// Minimizes `Σ c(v) x_v` over the program with all variables nonnegative.
///
/// The dual `max bᵀy, Aᵀy <= c, y >= 0` starts feasible at `y = 0` because
/// `c >= 0`, so a single phase of Bland's rule suffices. The primal optimum is
/// read off the reduced costs of the slack columns, and both solutions are
/// checked exactly before returning.
pub fn lp_min(lp: &LinearProgram, c: &CostFn) -> Result<LpSolution> {
    if c.len() != lp.n {
        return Err(Error::contract(format!("{} costs for {} vertices", c.len(), lp.n)));
    }
    let obj = lp.objective(c);
    let nv = lp.vars.len();
    let m = lp.rows.len();
    let cols = m + nv;

    // Tableau row j: Σ_i A[i][j] y_i + s_j = c_j.
    let mut t = vec![vec![Rational::zero(); cols + 1]; nv];
    for (i, row) in lp.rows.iter().enumerate() {
        for (j, a) in &row.coeffs {
            t[*j][i] += a;
        }
    }
    for j in 0..nv {
        t[j][m + j] = Rational::one();
        t[j][cols] = obj[j].clone();
    }
    let mut basis: Vec<usize> = (m..cols).collect();
    // Reduced costs of the maximization: entering columns have a positive entry.
    let mut red = vec![Rational::zero(); cols + 1];
    for (i, row) in lp.rows.iter().enumerate() {
        red[i] = row.rhs.clone();
    }

    while let Some(enter) = (0..cols).find(|&k| red[k].is_positive()) {
        let mut leave: Option<(usize, Rational)> = None;
        for (r, row) in t.iter().enumerate() {
            if !row[enter].is_positive() {
                continue;
            }
            let q = &row[cols] / &row[enter];
            let better = match &leave {
                None => true,
                Some((lr, lq)) => q < *lq || (q == *lq && basis[r] < basis[*lr]),
            };
            if better {
                leave = Some((r, q));
            }
        }
        let Some((r, _)) = leave else {
            return Ok(LpSolution {
                status: LpStatus::Infeasible,
                values: Vec::new(),
                objective: Rational::zero(),
                duals: Vec::new(),
            });
        };
        pivot(&mut t, &mut red, r, enter);
        basis[r] = enter;
    }

    let mut duals = vec![Rational::zero(); m];
    for (r, &b) in basis.iter().enumerate() {
        if b < m {
            duals[b] = t[r][cols].clone();
        }
    }
    let values: Vec<Rational> = (0..nv).map(|j| -&red[m + j]).collect();
    let objective: Rational = obj.iter().zip(&values).map(|(a, x)| a * x).sum();
    let sol = LpSolution {
        status: LpStatus::Optimal,
        values,
        objective,
        duals,
    };
    certify_optimal(lp, &obj, &sol)?;
    Ok(sol)
}

fn pivot(t: &mut [Vec<Rational>], red: &mut [Rational], r: usize, k: usize) {
    let p = t[r][k].clone();
    for a in t[r].iter_mut() {
        *a /= &p;
    }
    let prow = t[r].clone();
    let nonzero: Vec<usize> = (0..prow.len()).filter(|&j| !prow[j].is_zero()).collect();
    for (i, row) in t.iter_mut().enumerate() {
        if i == r || row[k].is_zero() {
            continue;
        }
        let f = row[k].clone();
        for &j in &nonzero {
            row[j] -= &f * &prow[j];
        }
    }
    if !red[k].is_zero() {
        let f = red[k].clone();
        for &j in &nonzero {
            red[j] -= &f * &prow[j];
        }
    }
}

/// Primal feasibility, dual feasibility and equal objectives.
fn certify_optimal(lp: &LinearProgram, obj: &[Rational], sol: &LpSolution) -> Result<()> {
    if sol.values.iter().any(Signed::is_negative) {
        return Err(Error::invariant("negative primal value"));
    }
    if let Some(row) = lp.first_violation(&sol.values) {
        return Err(Error::invariant(format!("primal solution violates {}", row.origin)));
    }
    if sol.duals.iter().any(Signed::is_negative) {
        return Err(Error::invariant("negative dual multiplier"));
    }
    let mut used = vec![Rational::zero(); lp.vars.len()];
    for (row, y) in lp.rows.iter().zip(&sol.duals) {
        for (j, a) in &row.coeffs {
            used[*j] += a * y;
        }
    }
    if used.iter().zip(obj).any(|(u, c)| u > c) {
        return Err(Error::invariant("dual solution is infeasible"));
    }
    let dual_value: Rational = lp.rows.iter().zip(&sol.duals).map(|(r, y)| &r.rhs * y).sum();
    if dual_value != sol.objective {
        return Err(Error::invariant(format!(
            "duality gap: primal {} against dual {dual_value}",
            sol.objective
        )));
    }
    Ok(())
}

pub fn sa_value(g: &Graph, c: &CostFn, r: u8) -> Result<Rational> {
    let sol = lp_min(&build_sa(g, r)?, c)?;
    match sol.status {
        LpStatus::Optimal => Ok(sol.objective),
        other => Err(Error::invariant(format!("relaxation reported {other:?}"))),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Gap {
    Finite(Rational),
    /// The relaxation is zero while the optimum is not.
    Infinite,
}

impl fmt::Display for Gap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gap::Finite(q) => write!(f, "{q}"),
            Gap::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GapReport {
    pub lp: Rational,
    pub opt: Rational,
    pub gap: Gap,
}

/// `OPT / SA_r`; instances with `OPT = 0` count as gap 1.
pub fn integrality_gap(g: &Graph, c: &CostFn, r: u8) -> Result<GapReport> {
    let opt = cluster_vd_exact(g, c)?.cost;
    let lp = sa_value(g, c, r)?;
    let gap = if opt.is_zero() {
        Gap::Finite(Rational::one())
    } else if lp.is_zero() {
        Gap::Infinite
    } else {
        Gap::Finite(&opt / &lp)
    };
    Ok(GapReport { lp, opt, gap })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LbReport {
    /// Values for every variable of the one-round lift.
    pub values: Vec<Rational>,
    pub first_violation: Option<Origin>,
    pub objective: Rational,
}

impl LbReport {
    pub fn feasible(&self) -> bool {
        self.first_violation.is_none()
    }
}

/// A triangle or a 4-cycle (not necessarily induced), if the girth is below 5.
pub fn short_cycle(g: &Graph) -> Option<Vec<usize>> {
    for (u, v) in g.edges() {
        let mut common = g.neighbors(u).clone();
        common.intersect_with(g.neighbors(v));
        if let Some(w) = common.ones().next() {
            return Some(vec![u, v, w]);
        }
    }
    for a in 0..g.n() {
        for b in a + 1..g.n() {
            let mut common = g.neighbors(a).clone();
            common.intersect_with(g.neighbors(b));
            let mut it = common.ones();
            if let (Some(x), Some(y)) = (it.next(), it.next()) {
                return Some(vec![a, x, b, y]);
            }
        }
    }
    None
}

/// The point with `x_v = 2/5`, pair values 0 on edges and 1/5 on non-edges,
/// checked against every row of the one-round lift.
pub fn lb_point(g: &Graph) -> Result<LbReport> {
    if let Some(cycle) = short_cycle(g) {
        return Err(Error::precondition(format!("girth below 5: cycle {cycle:?}")));
    }
    let lp = build_sa(g, 1)?;
    let values: Vec<Rational> = lp
        .vars
        .iter()
        .map(|var| match *var {
            Var::Singleton(_) => ratio(2, 5),
            Var::Pair(u, v) if g.has_edge(u, v) => Rational::zero(),
            Var::Pair(..) => ratio(1, 5),
        })
        .collect();
    let first_violation = lp.first_violation(&values).map(|r| r.origin);
    let objective = values[..g.n()].iter().sum();
    Ok(LbReport {
        values,
        first_violation,
        objective,
    })
}

/// Pairs `{a, b}` for which some `{u, v}` makes both `{u, v, a}` and
/// `{u, v, b}` induce a P3.
pub fn is_diagonal(g: &Graph, a: usize, b: usize) -> bool {
    let n = g.n();
    (0..n).filter(|&u| u != a && u != b).any(|u| {
        (u + 1..n)
            .filter(|&v| v != a && v != b)
            .any(|v| g.is_p3_set(u, v, a) && g.is_p3_set(u, v, b))
    })
}

/// Looks for a P3 containing a diagonal pair whose three values are all
/// below 2/5. Feasible points of the one-round lift never have one.
pub fn diagonal_scan(g: &Graph, x: &LpSolution) -> Option<P3> {
    let bound = ratio(2, 5);
    g.all_p3s().into_iter().find(|p| {
        let [a, b, c] = p.vertices();
        let has_diagonal = is_diagonal(g, a, b) || is_diagonal(g, a, c) || is_diagonal(g, b, c);
        has_diagonal && p.vertices().iter().all(|&v| x.values[v] < bound)
    })
}

/// The largest unit-cost gap among `graphs`, with a graph attaining it.
pub fn max_gap<'a>(graphs: impl IntoIterator<Item = &'a Graph>, r: u8) -> Result<Option<(Rational, Graph)>> {
    let mut best: Option<(Rational, Graph)> = None;
    for g in graphs {
        let report = integrality_gap(g, &CostFn::unit(g.n()), r)?;
        let Gap::Finite(q) = report.gap else {
            return Err(Error::invariant(format!("infinite gap on {g:?}")));
        };
        if best.as_ref().is_none_or(|(b, _)| q > *b) {
            best = Some((q, g.clone()));
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cost::int;
    use crate::generate;

    #[test]
    fn row_counts() {
        let p3 = generate::path(3);
        assert_eq!(build_sa(&p3, 0).unwrap().rows.len(), 7);
        let lift = build_sa(&p3, 1).unwrap();
        assert_eq!(lift.vars.len(), 6);
        assert_eq!(lift.rows.len(), 3 + 3 + 6 + 3);
        let middle = build_sa_with(&p3, 1, LiftedRows::MiddleOnly).unwrap();
        assert_eq!(middle.rows.len(), 1 + 3 + 6 + 3);
        let c5 = build_sa(&generate::cycle(5), 0).unwrap();
        let covers = c5.rows.iter().filter(|r| matches!(r.origin, Origin::Cover(_))).count();
        assert_eq!(covers, 5);
        assert!(build_sa(&p3, 2).is_err());
    }

    #[test]
    fn pair_indices_are_consistent() {
        let lp = build_sa(&generate::complete(5), 1).unwrap();
        for (j, var) in lp.vars.iter().enumerate() {
            assert_eq!(lp.var_index(*var), Some(j));
        }
    }

    #[test]
    fn cycles_and_paths() {
        for n in 4..=9 {
            let v = sa_value(&generate::cycle(n), &CostFn::unit(n), 0).unwrap();
            assert_eq!(v, ratio(n as i64, 3));
        }
        assert_eq!(sa_value(&generate::path(5), &CostFn::unit(5), 0).unwrap(), int(1));
        assert_eq!(sa_value(&generate::path(7), &CostFn::unit(7), 0).unwrap(), int(2));
        assert_eq!(sa_value(&Graph::empty(4), &CostFn::unit(4), 0).unwrap(), int(0));
    }

    #[test]
    fn gaps() {
        let c5 = integrality_gap(&generate::cycle(5), &CostFn::unit(5), 0).unwrap();
        assert_eq!(c5.gap, Gap::Finite(ratio(6, 5)));
        let c4 = integrality_gap(&generate::cycle(4), &CostFn::unit(4), 0).unwrap();
        assert_eq!(c4.gap, Gap::Finite(ratio(3, 2)));
        let cl = integrality_gap(&generate::complete(3), &CostFn::unit(3), 1).unwrap();
        assert_eq!(cl.gap, Gap::Finite(int(1)));
    }

    #[test]
    fn lower_bound_point() {
        let pet = lb_point(&generate::petersen()).unwrap();
        assert!(pet.feasible());
        assert_eq!(pet.objective, int(4));
        let c5 = lb_point(&generate::cycle(5)).unwrap();
        assert!(c5.feasible());
        assert_eq!(c5.objective, int(2));
        assert!(matches!(lb_point(&generate::complete(3)), Err(Error::Precondition(_))));
        assert!(matches!(lb_point(&generate::cycle(4)), Err(Error::Precondition(_))));
    }

    #[test]
    fn diamond_has_no_diagonal_counterexample() {
        let diamond = Graph::from_edges(4, [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert!(is_diagonal(&diamond, 1, 2));
        let sol = lp_min(&build_sa(&diamond, 1).unwrap(), &CostFn::unit(4)).unwrap();
        assert_eq!(diagonal_scan(&diamond, &sol), None);
        let c5 = generate::cycle(5);
        let sol = lp_min(&build_sa(&c5, 1).unwrap(), &CostFn::unit(5)).unwrap();
        assert_eq!(diagonal_scan(&c5, &sol), None);
    }

    #[test]
    fn lp_text_mentions_every_row() {
        let lp = build_sa(&generate::path(3), 1).unwrap();
        let text = lp.to_lp_text(&CostFn::from_ints(&[1, 2, 3]));
        assert!(text.starts_with("Minimize\n obj: 1 x0 + 2 x1 + 3 x2\n"));
        assert_eq!(text.matches(">=").count(), lp.rows.len() + lp.vars.len());
        assert!(text.contains("r0: 1 x0 + 1 x1 + 1 x2 - 1 y0_1 - 1 y0_2 >= 1"));
    }
}
