//! Relative Ginzburg dg quivers `Γ_n(Q, F, W)`, derived preprojective dg
//! quivers `Π_{n-1}(F)` and the functor `G_rel` between them, as finite
//! presentations with symbolic differentials.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::quiver::{cyclic_derivative, rat, GradedArrow, IceQuiver, Path, PathSum, Potential, Vertex, VertexId};

/// Dual arrow `a^∨` of `Γ_n`.
pub fn dual_name(a: &str) -> String {
    format!("{a}^")
}

/// Arrow `ã` of the preprojective dg quiver.
pub fn tilde_name(a: &str) -> String {
    format!("{a}~")
}

pub fn t_name(i: VertexId) -> String {
    format!("t{i}")
}

pub fn r_name(i: VertexId) -> String {
    format!("r{i}")
}

/// A graded quiver with a differential on its arrows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DgQuiver {
    pub quiver: IceQuiver,
    pub differential: BTreeMap<String, PathSum>,
    pub notes: Vec<String>,
}

fn degree(q: &IceQuiver, p: &Path) -> i32 {
    p.arrows.iter().map(|a| q.arrow(a).map_or(0, |x| x.degree)).sum()
}

fn word(q: &IceQuiver, ids: &[String]) -> PathSum {
    let mut out = PathSum::zero();
    if let (Some(first), Some(last)) = (ids.first(), ids.last()) {
        let (Ok(f), Ok(l)) = (q.arrow(first), q.arrow(last)) else {
            return out;
        };
        out.add_term(
            rat(1),
            Path {
                source: l.source,
                target: f.target,
                arrows: ids.to_vec(),
            },
        );
    }
    out
}

/// `[x, y] = xy − (−1)^{|x||y|} yx`.
pub fn supercommutator(x: &PathSum, dx: i32, y: &PathSum, dy: i32) -> PathSum {
    let sign = if (dx * dy).rem_euclid(2) == 0 { rat(1) } else { rat(-1) };
    x.compose(y).sub(&y.compose(x).scale(&sign))
}

fn arrow_sum(a: &GradedArrow) -> PathSum {
    PathSum::from_path(Path::arrow(a.id.clone(), a.source, a.target))
}

impl DgQuiver {
    pub fn d_arrow(&self, a: &str) -> PathSum {
        self.differential.get(a).cloned().unwrap_or_default()
    }

    /// Graded Leibniz rule along the written word.
    pub fn d_path(&self, p: &Path) -> PathSum {
        let mut out = PathSum::zero();
        let mut sign = 0i32;
        for (m, a) in p.arrows.iter().enumerate() {
            let da = self.d_arrow(a);
            if !da.is_zero() {
                let mut term = da;
                if m > 0 {
                    term = word(&self.quiver, &p.arrows[..m]).compose(&term);
                }
                if m + 1 < p.arrows.len() {
                    term = term.compose(&word(&self.quiver, &p.arrows[m + 1..]));
                }
                if sign.rem_euclid(2) == 1 {
                    term = term.scale(&rat(-1));
                }
                out = out.add(&term);
            }
            sign += self.quiver.arrow(a).map_or(0, |x| x.degree);
        }
        out
    }

    pub fn d(&self, x: &PathSum) -> PathSum {
        x.map_paths(|p| self.d_path(p))
    }

    pub fn degree_of(&self, p: &Path) -> i32 {
        degree(&self.quiver, p)
    }

    /// Generators whose `d²` is not literally zero, with the residual.
    pub fn d_squared_residuals(&self) -> Vec<(String, PathSum)> {
        self.quiver
            .arrows()
            .iter()
            .filter_map(|a| {
                let r = self.d(&self.d_arrow(&a.id));
                (!r.is_zero()).then(|| (a.id.clone(), r))
            })
            .collect()
    }

    /// Checks that every `d(a)` has degree `|a| + 1` and the endpoints of `a`.
    pub fn check_degrees(&self) -> Result<()> {
        for a in self.quiver.arrows() {
            for (p, _) in self.d_arrow(&a.id).terms() {
                if p.source != a.source || p.target != a.target {
                    return Err(Error::Validation(format!(
                        "d({}) has a term {p} with wrong endpoints",
                        a.id
                    )));
                }
                if self.degree_of(p) != a.degree + 1 {
                    return Err(Error::DegreeMismatch { expected: a.degree + 1 });
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for DgQuiver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "dg quiver {}", self.quiver.name())?;
        for a in self.quiver.arrows() {
            let d = self.d_arrow(&a.id);
            writeln!(
                f,
                "  {}: {} -> {}  deg {}  d = {}",
                a.id,
                a.source,
                a.target,
                a.degree,
                if d.is_zero() { "0".to_string() } else { d.to_string() }
            )?;
        }
        for n in &self.notes {
            writeln!(f, "note: {n}")?;
        }
        Ok(())
    }
}

fn check_potential_degree(q: &IceQuiver, w: &Potential, n: i32) -> Result<()> {
    w.validate(q)?;
    let expected = 3 - n;
    for (c, _) in w.terms() {
        if q.word_degree(c.arrows())? != expected {
            return Err(Error::DegreeMismatch { expected });
        }
    }
    Ok(())
}

/// `Σ_{a ∉ F_1} [a, a^∨]` restricted to loops at `i`.
fn dual_commutators(q: &IceQuiver, i: VertexId, n: i32) -> PathSum {
    let mut total = PathSum::zero();
    for a in q.arrows().iter().filter(|a| !q.is_frozen_arrow(&a.id)) {
        let dual = PathSum::from_path(Path::arrow(dual_name(&a.id), a.target, a.source));
        total = total.add(&supercommutator(&arrow_sum(a), a.degree, &dual, 2 - n - a.degree));
    }
    total.restrict_loops(i)
}

/// `Γ_n(Q, F, W)`.
pub fn relative_ginzburg(q: &IceQuiver, w: &Potential, n: i32) -> Result<DgQuiver> {
    if n < 2 {
        return Err(Error::Validation(format!("n must be at least 2, got {n}")));
    }
    check_potential_degree(q, w, n)?;
    let mut arrows = q.arrows().to_vec();
    let mut differential = BTreeMap::new();
    for a in q.arrows().iter().filter(|a| !q.is_frozen_arrow(&a.id)) {
        let id = dual_name(&a.id);
        arrows.push(GradedArrow::new(id.clone(), a.target, a.source).with_degree(2 - n - a.degree));
        differential.insert(id, cyclic_derivative(w, &a.id, q)?);
    }
    for i in q.unfrozen() {
        let id = t_name(i);
        arrows.push(GradedArrow::new(id.clone(), i, i).with_degree(1 - n));
        differential.insert(id, dual_commutators(q, i, n));
    }
    differential.retain(|_, d: &mut PathSum| !d.is_zero());
    let quiver = IceQuiver::new(
        format!("Gamma_{n}({})", q.name()),
        q.vertices().to_vec(),
        q.frozen().iter().copied(),
        arrows,
        Some(q.frozen_arrows().iter().cloned().collect()),
    )?;
    Ok(DgQuiver {
        quiver,
        differential,
        notes: vec!["d(t_i) sums [a, a^] over the unfrozen arrows, the arrows with duals".into()],
    })
}

/// `Π_{n-1}(F)` for a graded quiver `F`.
pub fn preprojective(f: &IceQuiver, n: i32) -> Result<DgQuiver> {
    let mut arrows = f.arrows().to_vec();
    let mut differential = BTreeMap::new();
    for a in f.arrows() {
        arrows.push(GradedArrow::new(tilde_name(&a.id), a.target, a.source).with_degree(3 - n - a.degree));
    }
    for i in f.vertex_ids() {
        let mut total = PathSum::zero();
        for a in f.arrows() {
            let t = PathSum::from_path(Path::arrow(tilde_name(&a.id), a.target, a.source));
            total = total.add(&supercommutator(&arrow_sum(a), a.degree, &t, 3 - n - a.degree));
        }
        let id = r_name(i);
        arrows.push(GradedArrow::new(id.clone(), i, i).with_degree(2 - n));
        let d = total.restrict_loops(i);
        if !d.is_zero() {
            differential.insert(id, d);
        }
    }
    let vertices: Vec<Vertex> = f.vertices().to_vec();
    let quiver = IceQuiver::new(
        format!("Pi_{}({})", n - 1, f.name()),
        vertices,
        [],
        arrows,
        Some(vec![]),
    )?;
    Ok(DgQuiver {
        quiver,
        differential,
        notes: vec![],
    })
}

/// `G_rel : Π_{n-1}(F) → Γ_n(Q, F, W)`.
#[derive(Clone, Debug)]
pub struct DgFunctorData {
    pub source: DgQuiver,
    pub target: DgQuiver,
    pub vertices: BTreeMap<VertexId, VertexId>,
    pub arrows: BTreeMap<String, PathSum>,
}

impl DgFunctorData {
    pub fn apply_path(&self, p: &Path) -> PathSum {
        if p.is_lazy() {
            return PathSum::from_path(Path::lazy(self.vertices[&p.source]));
        }
        let mut out: Option<PathSum> = None;
        for a in &p.arrows {
            let img = self.arrows.get(a).cloned().unwrap_or_default();
            out = Some(match out {
                None => img,
                Some(acc) => acc.compose(&img),
            });
        }
        out.unwrap_or_default()
    }

    pub fn apply(&self, x: &PathSum) -> PathSum {
        x.map_paths(|p| self.apply_path(p))
    }

    /// `d(G(x)) − G(d(x))` for every generator `x` with a nonzero residual.
    pub fn chain_residuals(&self) -> Vec<(String, PathSum)> {
        self.source
            .quiver
            .arrows()
            .iter()
            .filter_map(|a| {
                let g = self.arrows.get(&a.id).cloned().unwrap_or_default();
                let r = self.target.d(&g).sub(&self.apply(&self.source.d_arrow(&a.id)));
                (!r.is_zero()).then(|| (a.id.clone(), r))
            })
            .collect()
    }

    pub fn verify(&self) -> Result<()> {
        match self.chain_residuals().into_iter().next() {
            None => Ok(()),
            Some((generator, r)) => Err(Error::ChainMapFailure {
                generator,
                residual: r.to_string(),
            }),
        }
    }

    /// Generators whose image is not homogeneous of the generator's degree.
    pub fn degree_violations(&self) -> Vec<String> {
        self.source
            .quiver
            .arrows()
            .iter()
            .filter(|a| {
                self.arrows
                    .get(&a.id)
                    .is_some_and(|g| g.terms().any(|(p, _)| self.target.degree_of(p) != a.degree))
            })
            .map(|a| a.id.clone())
            .collect()
    }
}

impl fmt::Display for DgFunctorData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "G_rel: {} -> {}",
            self.source.quiver.name(),
            self.target.quiver.name()
        )?;
        for a in self.source.quiver.arrows() {
            let g = self.arrows.get(&a.id).cloned().unwrap_or_default();
            writeln!(
                f,
                "  {} |-> {}",
                a.id,
                if g.is_zero() { "0".to_string() } else { g.to_string() }
            )?;
        }
        Ok(())
    }
}

/// Builds `G_rel` and checks that it commutes with the differentials.
pub fn ginzburg_functor(q: &IceQuiver, w: &Potential, n: i32) -> Result<DgFunctorData> {
    let target = relative_ginzburg(q, w, n)?;
    let f = q.frozen_subquiver();
    let source = preprojective(&f, n)?;
    let mut arrows = BTreeMap::new();
    for a in f.arrows() {
        arrows.insert(a.id.clone(), arrow_sum(a));
        arrows.insert(tilde_name(&a.id), cyclic_derivative(w, &a.id, q)?.scale(&rat(-1)));
    }
    for i in f.vertex_ids() {
        arrows.insert(r_name(i), dual_commutators(q, i, n));
    }
    let data = DgFunctorData {
        source,
        target,
        vertices: f.vertex_ids().map(|v| (v, v)).collect(),
        arrows,
    };
    data.verify()?;
    Ok(data)
}

/// Summary of the symbolic checks on one `(Q, F, W)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct GinzburgReport {
    pub generators: usize,
    pub d_squared_failures: Vec<String>,
    pub preprojective_failures: Vec<String>,
    pub chain_failures: Vec<String>,
    pub degree_failures: Vec<String>,
}

impl GinzburgReport {
    pub fn passes(&self) -> bool {
        self.d_squared_failures.is_empty()
            && self.preprojective_failures.is_empty()
            && self.chain_failures.is_empty()
            && self.degree_failures.is_empty()
    }
}

/// Runs every check and collects residuals instead of stopping at the first.
pub fn check_ginzburg(q: &IceQuiver, w: &Potential, n: i32) -> Result<GinzburgReport> {
    let gamma = relative_ginzburg(q, w, n)?;
    let pi = preprojective(&q.frozen_subquiver(), n)?;
    let mut report = GinzburgReport {
        generators: gamma.quiver.arrows().len() + pi.quiver.arrows().len(),
        ..Default::default()
    };
    let fmt = |v: Vec<(String, PathSum)>| v.into_iter().map(|(g, r)| format!("{g}: {r}")).collect::<Vec<_>>();
    report.d_squared_failures = fmt(gamma.d_squared_residuals());
    report.preprojective_failures = fmt(pi.d_squared_residuals());
    for dq in [&gamma, &pi] {
        if let Err(e) = dq.check_degrees() {
            report.degree_failures.push(format!("{}: {e}", dq.quiver.name()));
        }
    }
    match ginzburg_functor(q, w, n) {
        Ok(g) => report.degree_failures.extend(g.degree_violations()),
        Err(Error::ChainMapFailure { generator, residual }) => {
            report.chain_failures.push(format!("{generator}: {residual}"))
        }
        Err(e) => return Err(e),
    }
    Ok(report)
}
