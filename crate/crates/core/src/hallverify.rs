//! Mechanical verification of the multiplication formulas for quantum
//! cluster characters and of the induction that expresses every character in
//! cluster variables.
//!
//! Counts (extension classes, Hom strata, Grassmannians) are integers taken
//! at the working prime `p`, while the twists are powers of the formal `v`.
//! The identities therefore hold in `Z[v^±]/(v^2 - p)`, and every comparison
//! here is done after substituting `v = √p`, which is exact because `√p` is
//! irrational.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use serde::{Serialize, Serializer};
use serde_json::json;

use crate::ccmap::{cc_character, CCObject, FramedData};
use crate::error::{Error, Result};
use crate::qscalar::LaurentScalar;
use crate::qtorus::{SkewForm, TorusElement};
use crate::repmod::{
    aut_count, ext_classes, ext_dim, hall_numbers, hom_strata, submodule_dim_counts, Catalog, IsoClass, Rep,
};
use crate::seeds::enumerate_cluster_variables;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

/// Outcome of one verification instance.
#[derive(Clone, Debug, Serialize)]
pub struct Instance {
    pub key: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lhs: Option<TorusElement>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rhs: Option<TorusElement>,
}

impl Instance {
    fn pass(key: String) -> Self {
        Self { key, status: Status::Pass, message: None, lhs: None, rhs: None }
    }

    fn fail(key: String, message: String) -> Self {
        Self { key, status: Status::Fail, message: Some(message), lhs: None, rhs: None }
    }

    fn skipped(key: String, message: String) -> Self {
        Self { key, status: Status::Skipped, message: Some(message), lhs: None, rhs: None }
    }

    /// Compares both sides modulo `v^2 - p`.
    fn compare(key: String, lhs: TorusElement, rhs: TorusElement, p: u32) -> Self {
        match lhs.mismatch_at_sqrt(&rhs, p) {
            None => Self::pass(key),
            Some(e) => Self {
                key,
                status: Status::Fail,
                message: Some(format!("sides differ at exponent {e:?}")),
                lhs: Some(lhs),
                rhs: Some(rhs),
            },
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// A verification run: one instance per checked case, sorted by key.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub check: String,
    pub quiver: String,
    pub p: u32,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    pub instances: Vec<Instance>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub summary: BTreeMap<String, serde_json::Value>,
}

impl Report {
    fn new(check: &str, f: &FramedData, p: u32, mut instances: Vec<Instance>) -> Self {
        instances.sort_by(|a, b| a.key.cmp(&b.key));
        let count = |s| instances.iter().filter(|i| i.status == s).count();
        Self {
            check: check.into(),
            quiver: format!("A{}", f.n()),
            p,
            passed: count(Status::Pass),
            failed: count(Status::Fail),
            skipped: count(Status::Skipped),
            instances,
            summary: BTreeMap::new(),
        }
    }

    /// True when nothing failed.
    pub fn ok(&self) -> bool {
        self.failed == 0
    }

    /// The first failing instance, if any.
    pub fn first_failure(&self) -> Option<&Instance> {
        self.instances.iter().find(|i| i.status == Status::Fail)
    }
}

/// `ext(X, Y) + ext(Y, X)`: Ext in the cluster category restricted to modules.
pub fn ext_c(x: &Rep, y: &Rep) -> Result<usize> {
    Ok(ext_dim(x, y)? + ext_dim(y, x)?)
}

/// Human-readable name of a class: its summands by principal dimension
/// vector, joined with `+`.
pub fn class_label(cat: &Catalog, class: &IsoClass) -> String {
    if class.is_zero() {
        return "0".into();
    }
    let n = cat.quiver().principal();
    class
        .expanded()
        .iter()
        .map(|&k| {
            let d = cat.entry(k).dims();
            if cat.entry(k).is_principal() {
                let s: Vec<String> = d[..n].iter().map(usize::to_string).collect();
                format!("[{}]", s.join(","))
            } else {
                let j = (0..d.len()).find(|&j| cat.injective_index(j) == k);
                j.map_or_else(|| format!("E{}", k + 1), |j| format!("I{}", j + 1))
            }
        })
        .collect::<Vec<_>>()
        .join("+")
}

fn injective_label(injectives: &[usize]) -> String {
    let s: Vec<String> = injectives.iter().map(|j| format!("I{}[-1]", j + 1)).collect();
    s.join("+")
}

fn character(f: &FramedData, module: &Rep, injectives: &[usize], budget: u64) -> Result<TorusElement> {
    cc_character(f, &CCObject::new(module.clone(), injectives.to_vec())?, budget)
}

/// Vertices of the indecomposable injectives making up `class`.
fn injective_vertices(cat: &Catalog, class: &IsoClass) -> Result<Vec<usize>> {
    let m = cat.quiver().vertices();
    let mut out = Vec::new();
    for (k, mult) in class.parts() {
        let j = (0..m)
            .find(|&j| cat.injective_index(j) == k)
            .ok_or_else(|| Error::Internal(format!("class entry {} is not injective", k + 1)))?;
        out.extend(std::iter::repeat_n(j, mult as usize));
    }
    Ok(out)
}

fn twist(f: &FramedData, a: &[i64], b: &[i64]) -> Result<i64> {
    f.lambda().eval(a, b)
}

/// `v^{2 ext(M,N)} X_M X_N = v^{Λ(a,b)} Σ_E ε^E_{MN} X_E` with
/// `a = (Ĩ - R̃ᵗʳ) dim M` and `b = (Ĩ - R̃ᵗʳ) dim N`.
pub fn verify_thm_hallmulti(
    f: &FramedData,
    cat: &Catalog,
    m: &Rep,
    n: &Rep,
    budget: u64,
) -> Result<Instance> {
    let p = cat.p();
    let key =
        format!("{} * {}", class_label(cat, &cat.fingerprint(m)?), class_label(cat, &cat.fingerprint(n)?));
    let xm = character(f, m, &[], budget)?;
    let xn = character(f, n, &[], budget)?;
    let ext = ext_dim(m, n)? as i64;
    let lhs = f.lambda().mul(&xm, &xn)?.scale_v(2 * ext);

    let tally = ext_classes(m, n, cat, budget)?;
    if tally.classes.get(&tally.split) != Some(&1) {
        return Ok(Instance::fail(key, "split middle term does not occur exactly once".into()));
    }
    let mut rhs = TorusElement::zero(f.m());
    for (class, &count) in &tally.classes {
        let e = cat.realize(class)?;
        rhs += &character(f, &e, &[], budget)?.scale(&LaurentScalar::constant(count));
    }
    let a = f.boundary(&m.dim_vector())?;
    let b = f.boundary(&n.dim_vector())?;
    let rhs = rhs.scale_v(twist(f, &a, &b)?);
    Ok(Instance::compare(key, lhs, rhs, p))
}

/// `v^{2 hom(M,I)} X_M X_{I[-1]} = v^{Λ(a, -soc I)} Σ |Hom(M,I)_{B,I'}| X_{B ⊕ I'[-1]}`
/// for the injective `I = ⊕ I_j` over the given vertices.
pub fn verify_prop_injective(
    f: &FramedData,
    cat: &Catalog,
    m: &Rep,
    injectives: &[usize],
    budget: u64,
) -> Result<Instance> {
    let p = cat.p();
    let key = format!("{} * {}", class_label(cat, &cat.fingerprint(m)?), injective_label(injectives));
    let (lhs, rhs) = prop_sides(f, cat, m, injectives, budget)?;
    Ok(Instance::compare(key, lhs, rhs, p))
}

fn injective_module(cat: &Catalog, injectives: &[usize]) -> Result<Rep> {
    let q = cat.quiver();
    let parts =
        injectives.iter().map(|&j| Rep::injective(Arc::clone(q), cat.p(), j)).collect::<Result<Vec<_>>>()?;
    Rep::direct_sum_all(Arc::clone(q), cat.p(), parts.iter())
}

fn prop_sides(
    f: &FramedData,
    cat: &Catalog,
    m: &Rep,
    injectives: &[usize],
    budget: u64,
) -> Result<(TorusElement, TorusElement)> {
    let inj = injective_module(cat, injectives)?;
    let xm = character(f, m, &[], budget)?;
    let zero = Rep::zero(Arc::clone(cat.quiver()), cat.p());
    let xi = character(f, &zero, injectives, budget)?;
    let strata = hom_strata(m, &inj, cat, budget)?;
    let lhs = f.lambda().mul(&xm, &xi)?.scale_v(2 * strata.hom_dim as i64);
    let mut rhs = TorusElement::zero(f.m());
    for ((b, i2), &count) in &strata.strata {
        let b = cat.realize(b)?;
        let verts = injective_vertices(cat, i2)?;
        rhs += &character(f, &b, &verts, budget)?.scale(&LaurentScalar::constant(count));
    }
    let a = f.boundary(&m.dim_vector())?;
    let soc: Vec<i64> = inj.socle().iter().map(|&s| -(s as i64)).collect();
    Ok((lhs, rhs.scale_v(twist(f, &a, &soc)?)))
}

/// For every non-split middle term `E` of `0 -> N -> E -> M -> 0`:
/// `extC(E, E) < extC(M ⊕ N, M ⊕ N)`.
pub fn verify_lemma_ext_drop(cat: &Catalog, m: &Rep, n: &Rep, budget: u64) -> Result<Instance> {
    let key =
        format!("{} * {}", class_label(cat, &cat.fingerprint(m)?), class_label(cat, &cat.fingerprint(n)?));
    if ext_dim(m, n)? == 0 {
        return Err(Error::Domain(format!("{key}: Ext^1(M, N) vanishes")));
    }
    let split = m.direct_sum(n)?;
    let bound = ext_c(&split, &split)?;
    let tally = ext_classes(m, n, cat, budget)?;
    for class in tally.classes.keys().filter(|c| **c != tally.split) {
        let e = cat.realize(class)?;
        let here = ext_c(&e, &e)?;
        if here >= bound {
            return Ok(Instance::fail(
                key,
                format!("middle term {} has extC {here}, split term has {bound}", class_label(cat, class)),
            ));
        }
    }
    Ok(Instance::pass(key))
}

fn principal_reps(cat: &Catalog) -> Vec<(usize, Rep)> {
    cat.principal_indices().iter().map(|&k| (k, cat.entry(k).clone())).collect()
}

fn guard(key: String, r: Result<Instance>) -> Result<Instance> {
    match r {
        Ok(i) => Ok(i),
        Err(Error::BudgetExceeded(msg) | Error::Unsupported(msg)) => Ok(Instance::skipped(key, msg)),
        Err(e) => Err(e),
    }
}

/// The product formula for every ordered pair of indecomposables.
pub fn run_hall_product(f: &FramedData, p: u32, budget: u64) -> Result<Report> {
    let cat = f.catalog(p)?;
    let reps = principal_reps(&cat);
    let mut out = Vec::new();
    for (x, m) in &reps {
        for (y, n) in &reps {
            let key = format!("pair {} {}", x + 1, y + 1);
            out.push(guard(key, verify_thm_hallmulti(f, &cat, m, n, budget))?);
        }
    }
    Ok(Report::new("hall-product", f, p, out))
}

/// The injective product formula for every indecomposable module and every
/// indecomposable injective of the framed quiver.
pub fn run_injective_product(f: &FramedData, p: u32, budget: u64) -> Result<Report> {
    let cat = f.catalog(p)?;
    let mut out = Vec::new();
    for (x, m) in principal_reps(&cat) {
        for j in 0..f.m() {
            let key = format!("pair {} I{}", x + 1, j + 1);
            out.push(guard(key, verify_prop_injective(f, &cat, &m, &[j], budget))?);
        }
    }
    Ok(Report::new("injective-product", f, p, out))
}

/// The Ext drop for every ordered pair of indecomposables with `Ext^1 != 0`.
pub fn run_ext_drop(f: &FramedData, p: u32, budget: u64) -> Result<Report> {
    let cat = f.catalog(p)?;
    let reps = principal_reps(&cat);
    let mut out = Vec::new();
    for (x, m) in &reps {
        for (y, n) in &reps {
            if ext_dim(m, n)? > 0 {
                let key = format!("pair {} {}", x + 1, y + 1);
                out.push(guard(key, verify_lemma_ext_drop(&cat, m, n, budget))?);
            }
        }
    }
    Ok(Report::new("ext-drop", f, p, out))
}

/// Counting identities between extension classes, Hall numbers,
/// Grassmannians and Hom strata:
/// `Σ_E ε^E_{MN} = p^{ext(M,N)}`, `Σ_{dim B = e} F^M_{AB} = |Gr_e M|`, and
/// `|Hom(M,I)_{B,I'}| = Σ_A |Aut A| F^M_{AB} F^I_{I'A}`.
pub fn run_counting(f: &FramedData, p: u32, budget: u64) -> Result<Report> {
    let cat = f.catalog(p)?;
    let reps = principal_reps(&cat);
    let mut out = Vec::new();
    for (x, m) in &reps {
        for (y, n) in &reps {
            let key = format!("ext-total {} {}", x + 1, y + 1);
            out.push(guard(
                key.clone(),
                (|| {
                    let tally = ext_classes(m, n, &cat, budget)?;
                    let want = (p as u64).pow(tally.dim as u32);
                    Ok(if tally.total() == want {
                        Instance::pass(key)
                    } else {
                        Instance::fail(key, format!("{} classes, expected {want}", tally.total()))
                    })
                })(),
            )?);
        }
    }
    for class in module_inventory(&cat, 2, 2) {
        let key = format!("hall-grassmannian {}", class_label(&cat, &class));
        out.push(guard(
            key.clone(),
            (|| {
                let m = cat.realize(&class)?;
                let hall = hall_numbers(&m, &cat, budget)?;
                let mut by_dim: BTreeMap<Vec<usize>, u64> = BTreeMap::new();
                for ((_, b), &c) in &hall.numbers {
                    *by_dim.entry(cat.realize(b)?.dims().to_vec()).or_insert(0) += c;
                }
                let want = submodule_dim_counts(&m, budget)?;
                Ok(if by_dim == want {
                    Instance::pass(key)
                } else {
                    Instance::fail(key, format!("Hall sums {by_dim:?}, Grassmannians {want:?}"))
                })
            })(),
        )?);
    }
    for (x, m) in &reps {
        for j in 0..f.m() {
            let key = format!("hom-strata {} I{}", x + 1, j + 1);
            let k2 = key.clone();
            out.push(guard(
                key,
                (|| {
                    let inj = injective_module(&cat, &[j])?;
                    let strata = hom_strata(m, &inj, &cat, budget)?;
                    let hall_m = hall_numbers(m, &cat, budget)?;
                    let hall_i = hall_numbers(&inj, &cat, budget)?;
                    let mut want: BTreeMap<(IsoClass, IsoClass), u64> = BTreeMap::new();
                    for ((a, b), &fm) in &hall_m.numbers {
                        let aut = aut_count(&cat.realize(a)?, budget)?;
                        for ((i2, a2), &fi) in &hall_i.numbers {
                            if a2 == a {
                                *want.entry((b.clone(), i2.clone())).or_insert(0) += aut * fm * fi;
                            }
                        }
                    }
                    Ok(if want == strata.strata {
                        Instance::pass(k2)
                    } else {
                        Instance::fail(k2, format!("strata {:?}, Hall side {want:?}", strata.strata))
                    })
                })(),
            )?);
        }
    }
    Ok(Report::new("counting", f, p, out))
}

/// Multisets of principal indecomposables with at most `max_summands`
/// summands, each of multiplicity at most `max_mult`, in a fixed order.
pub fn module_inventory(cat: &Catalog, max_summands: u32, max_mult: u32) -> Vec<IsoClass> {
    let idx = cat.principal_indices().to_vec();
    let mut out = Vec::new();
    fn go(idx: &[usize], pos: usize, cur: &mut IsoClass, left: u32, max_mult: u32, out: &mut Vec<IsoClass>) {
        if pos == idx.len() {
            out.push(cur.clone());
            return;
        }
        for k in 0..=max_mult.min(left) {
            cur.0[idx[pos]] = k;
            go(idx, pos + 1, cur, left - k, max_mult, out);
        }
        cur.0[idx[pos]] = 0;
    }
    go(&idx, 0, &mut cat.zero_class(), max_summands, max_mult, &mut out);
    out.sort_by_key(|c| (c.summands(), c.clone()));
    out
}

/// Multisets of at most `max` vertices of the framed quiver, ascending.
pub fn injective_inventory(m: usize, max: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..max {
        let mut next = Vec::new();
        for s in &layer {
            let start = s.last().copied().unwrap_or(0);
            for j in start..m {
                let mut t: Vec<usize> = s.clone();
                t.push(j);
                next.push(t);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// A factor in a cluster monomial: the character of a principal
/// indecomposable (by catalog index) or the initial variable `X^{e_j}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Factor {
    Module(usize),
    Shift(usize),
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Factor::Module(k) => write!(f, "M{}", k + 1),
            Factor::Shift(j) => write!(f, "x{}", j + 1),
        }
    }
}

impl Serialize for Factor {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// A `Z[v^±]`-combination of ordered products of factors.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ClusterExpression {
    terms: BTreeMap<Vec<Factor>, LaurentScalar>,
}

impl ClusterExpression {
    pub fn one() -> Self {
        Self::monomial(Vec::new(), LaurentScalar::one())
    }

    pub fn atom(f: Factor) -> Self {
        Self::monomial(vec![f], LaurentScalar::one())
    }

    pub fn monomial(factors: Vec<Factor>, c: LaurentScalar) -> Self {
        let mut out = Self::default();
        out.add_term(factors, c);
        out
    }

    fn add_term(&mut self, factors: Vec<Factor>, c: LaurentScalar) {
        let slot = self.terms.entry(factors).or_default();
        *slot += &c;
        if slot.is_zero() {
            self.terms.retain(|_, c| !c.is_zero());
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &ClusterExpression, c: &LaurentScalar) {
        for (f, x) in &other.terms {
            self.add_term(f.clone(), x * c);
        }
    }

    /// Ordered product: factor sequences are concatenated.
    pub fn mul(&self, other: &ClusterExpression) -> ClusterExpression {
        let mut out = Self::default();
        for (f, x) in &self.terms {
            for (g, y) in &other.terms {
                let mut fg = f.clone();
                fg.extend_from_slice(g);
                out.add_term(fg, x * y);
            }
        }
        out
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[Factor], &LaurentScalar)> + '_ {
        self.terms.iter().map(|(f, c)| (f.as_slice(), c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Every factor that occurs.
    pub fn factors(&self) -> BTreeSet<Factor> {
        self.terms.keys().flatten().cloned().collect()
    }
}

impl Serialize for ClusterExpression {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let terms: Vec<_> =
            self.terms.iter().map(|(f, c)| json!({ "coeff": c.to_string(), "factors": f })).collect();
        terms.serialize(s)
    }
}

impl fmt::Display for ClusterExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (fs, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({c})")?;
            for x in fs {
                write!(f, "·{x}")?;
            }
        }
        Ok(())
    }
}

/// An object `M ⊕ I[-1]` named by the class of `M` and the injective
/// vertices.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ObjKey {
    pub module: IsoClass,
    pub injectives: Vec<usize>,
}

/// Lexicographic measure that strictly drops along every rewriting edge:
/// (module dimension, injective part present, extC(M, M), summands).
type Measure = (usize, bool, usize, u32);

/// Rewrites characters of cluster-category objects as expressions in
/// characters of indecomposables and initial variables, following the
/// product formulas solved for the split (resp. zero-map) term.
pub struct Expresser<'a> {
    f: &'a FramedData,
    cat: Catalog,
    budget: u64,
    memo: HashMap<ObjKey, ClusterExpression>,
    measures: HashMap<ObjKey, Measure>,
    chars: HashMap<ObjKey, TorusElement>,
    products: HashMap<Vec<Factor>, TorusElement>,
    edges: usize,
}

impl<'a> Expresser<'a> {
    pub fn new(f: &'a FramedData, p: u32, budget: u64) -> Result<Self> {
        Ok(Self {
            f,
            cat: f.catalog(p)?,
            budget,
            memo: HashMap::new(),
            measures: HashMap::new(),
            chars: HashMap::new(),
            products: HashMap::new(),
            edges: 0,
        })
    }

    pub fn catalog(&self) -> &Catalog {
        &self.cat
    }

    /// Number of rewriting edges checked so far.
    pub fn edges(&self) -> usize {
        self.edges
    }

    pub fn key_of(&self, obj: &CCObject) -> Result<ObjKey> {
        let mut injectives = obj.injectives.clone();
        injectives.sort_unstable();
        Ok(ObjKey { module: self.cat.fingerprint(&obj.module)?, injectives })
    }

    pub fn object(&self, key: &ObjKey) -> Result<CCObject> {
        CCObject::new(self.cat.realize(&key.module)?, key.injectives.clone())
    }

    pub fn label(&self, key: &ObjKey) -> String {
        let m = class_label(&self.cat, &key.module);
        if key.injectives.is_empty() {
            m
        } else {
            format!("{m} | {}", injective_label(&key.injectives))
        }
    }

    /// The character computed directly from the definition.
    pub fn character(&mut self, key: &ObjKey) -> Result<TorusElement> {
        if let Some(x) = self.chars.get(key) {
            return Ok(x.clone());
        }
        let x = cc_character(self.f, &self.object(key)?, self.budget)?;
        self.chars.insert(key.clone(), x.clone());
        Ok(x)
    }

    fn measure(&mut self, key: &ObjKey) -> Result<Measure> {
        if let Some(&m) = self.measures.get(key) {
            return Ok(m);
        }
        let module = self.cat.realize(&key.module)?;
        let m =
            (module.total_dim(), !key.injectives.is_empty(), ext_c(&module, &module)?, key.module.summands());
        self.measures.insert(key.clone(), m);
        Ok(m)
    }

    fn child(&mut self, parent: &ObjKey, child: &ObjKey) -> Result<ClusterExpression> {
        let (mp, mc) = (self.measure(parent)?, self.measure(child)?);
        if mc >= mp {
            return Err(Error::Verification(format!(
                "measure did not decrease from {} {mp:?} to {} {mc:?}",
                self.label(parent),
                self.label(child)
            )));
        }
        self.edges += 1;
        self.express(child)
    }

    fn module_key(&self, module: IsoClass) -> ObjKey {
        ObjKey { module, injectives: Vec::new() }
    }

    /// The expression for `key`, memoized.
    pub fn express(&mut self, key: &ObjKey) -> Result<ClusterExpression> {
        if let Some(e) = self.memo.get(key) {
            return Ok(e.clone());
        }
        let expr = self.rewrite(key)?;
        self.memo.insert(key.clone(), expr.clone());
        Ok(expr)
    }

    fn rewrite(&mut self, key: &ObjKey) -> Result<ClusterExpression> {
        let lambda: SkewForm = self.f.lambda().clone();
        let m = self.f.m();
        if key.module.is_zero() {
            // X^{Σ e_j} = v^{-Σ_{a<b} Λ(e_a, e_b)} X^{e_1} ... X^{e_k}
            let mut shift = 0;
            for (a, &ja) in key.injectives.iter().enumerate() {
                for &jb in &key.injectives[a + 1..] {
                    shift -= lambda.entry(ja, jb);
                }
            }
            let factors = key.injectives.iter().map(|&j| Factor::Shift(j)).collect();
            return Ok(ClusterExpression::monomial(factors, LaurentScalar::v_pow(shift)));
        }
        if key.injectives.is_empty() {
            let parts = key.module.expanded();
            if parts.len() == 1 {
                return Ok(ClusterExpression::atom(Factor::Module(parts[0])));
            }
            return self.rewrite_module_sum(key, parts[0]);
        }
        self.rewrite_mixed(key, m)
    }

    /// `X_{M1 ⊕ M2} = v^{2 ext - Λ(a,b)} X_{M1} X_{M2} - Σ_{E non-split} ε^E X_E`.
    fn rewrite_module_sum(&mut self, key: &ObjKey, first: usize) -> Result<ClusterExpression> {
        let c1 = self.cat.unit_class(first);
        let mut c2 = key.module.clone();
        c2.0[first] -= 1;
        let (m1, m2) = (self.cat.realize(&c1)?, self.cat.realize(&c2)?);
        let tally = ext_classes(&m1, &m2, &self.cat, self.budget)?;
        if tally.split != key.module || tally.classes.get(&tally.split) != Some(&1) {
            return Err(Error::Verification(format!(
                "split term of {} does not occur exactly once",
                self.label(key)
            )));
        }
        let a = self.f.boundary(&m1.dim_vector())?;
        let b = self.f.boundary(&m2.dim_vector())?;
        let shift = 2 * tally.dim as i64 - twist(self.f, &a, &b)?;
        let k1 = self.module_key(c1);
        let k2 = self.module_key(c2);
        let e1 = self.child(key, &k1)?;
        let e2 = self.child(key, &k2)?;
        let mut out = ClusterExpression::default();
        out.add_scaled(&e1.mul(&e2), &LaurentScalar::v_pow(shift));
        let bound = self.measure(key)?.2;
        for (class, &count) in &tally.classes {
            if *class == tally.split {
                continue;
            }
            let ke = self.module_key(class.clone());
            if self.measure(&ke)?.2 >= bound {
                return Err(Error::Verification(format!(
                    "extC did not drop from {} to {}",
                    self.label(key),
                    self.label(&ke)
                )));
            }
            let ee = self.child(key, &ke)?;
            out.add_scaled(&ee, &LaurentScalar::constant(-(count as i64)));
        }
        Ok(out)
    }

    /// `X_{M ⊕ I[-1]} = v^{2 hom - Λ(a, -soc I)} X_M X_{I[-1]} - Σ_{f != 0} X_{ker f ⊕ coker f[-1]}`.
    fn rewrite_mixed(&mut self, key: &ObjKey, _m: usize) -> Result<ClusterExpression> {
        let module = self.cat.realize(&key.module)?;
        let inj = injective_module(&self.cat, &key.injectives)?;
        let strata = hom_strata(&module, &inj, &self.cat, self.budget)?;
        let zero_stratum = (key.module.clone(), self.cat.fingerprint(&inj)?);
        if strata.strata.get(&zero_stratum) != Some(&1) {
            return Err(Error::Verification(format!(
                "zero-map stratum of {} does not occur exactly once",
                self.label(key)
            )));
        }
        let a = self.f.boundary(&module.dim_vector())?;
        let soc: Vec<i64> = inj.socle().iter().map(|&s| -(s as i64)).collect();
        let shift = 2 * strata.hom_dim as i64 - twist(self.f, &a, &soc)?;
        let km = self.module_key(key.module.clone());
        let ki = ObjKey { module: self.cat.zero_class(), injectives: key.injectives.clone() };
        let em = self.child(key, &km)?;
        let ei = self.child(key, &ki)?;
        let mut out = ClusterExpression::default();
        out.add_scaled(&em.mul(&ei), &LaurentScalar::v_pow(shift));
        for ((b, i2), &count) in &strata.strata {
            if (b, i2) == (&zero_stratum.0, &zero_stratum.1) {
                continue;
            }
            let kb = ObjKey { module: b.clone(), injectives: injective_vertices(&self.cat, i2)? };
            let eb = self.child(key, &kb)?;
            out.add_scaled(&eb, &LaurentScalar::constant(-(count as i64)));
        }
        Ok(out)
    }

    /// Value of a factor in the quantum torus.
    pub fn factor_value(&mut self, factor: &Factor) -> Result<TorusElement> {
        match *factor {
            Factor::Module(k) => {
                let key = self.module_key(self.cat.unit_class(k));
                self.character(&key)
            }
            Factor::Shift(j) => {
                let mut e = vec![0; self.f.m()];
                e[j] = 1;
                Ok(TorusElement::basis(e))
            }
        }
    }

    fn product(&mut self, factors: &[Factor]) -> Result<TorusElement> {
        if let Some(x) = self.products.get(factors) {
            return Ok(x.clone());
        }
        let x = match factors.split_last() {
            None => TorusElement::one(self.f.m()),
            Some((last, init)) => {
                let head = self.product(init)?;
                let tail = self.factor_value(last)?;
                self.f.lambda().mul(&head, &tail)?
            }
        };
        self.products.insert(factors.to_vec(), x.clone());
        Ok(x)
    }

    /// Evaluates an expression in the quantum torus.
    pub fn evaluate(&mut self, expr: &ClusterExpression) -> Result<TorusElement> {
        let mut out = TorusElement::zero(self.f.m());
        for (fs, c) in expr.terms() {
            out += &self.product(fs)?.scale(c);
        }
        Ok(out)
    }
}

/// Expresses one object in cluster variables.
pub fn express_in_cluster_basis(
    f: &FramedData,
    obj: &CCObject,
    p: u32,
    budget: u64,
) -> Result<ClusterExpression> {
    let mut ex = Expresser::new(f, p, budget)?;
    let key = ex.key_of(obj)?;
    ex.express(&key)
}

/// Both inclusions at desk scale: every object in the inventory is
/// expressed in cluster variables with an exact round trip, and every
/// cluster variable of the seed closure is an indecomposable character or
/// an initial variable.
pub fn verify_main_theorem(f: &FramedData, p: u32, budget: u64, seed_budget: usize) -> Result<Report> {
    let seed = f.seed()?;
    let variables = enumerate_cluster_variables(&seed, seed_budget)?;
    let mut ex = Expresser::new(f, p, budget)?;
    let cat = ex.catalog().clone();
    let mut out = Vec::new();

    // Base factors.
    let mut good_bases = BTreeSet::new();
    for &k in cat.principal_indices() {
        let factor = Factor::Module(k);
        let x = ex.factor_value(&factor)?;
        let key = format!("base {}", class_label(&cat, &cat.unit_class(k)));
        if variables.contains(&x) {
            good_bases.insert(factor);
            out.push(Instance::pass(key));
        } else {
            out.push(Instance::fail(key, "character is not a cluster variable".into()));
        }
    }
    for j in 0..f.m() {
        let factor = Factor::Shift(j);
        let x = ex.factor_value(&factor)?;
        let key = format!("base x{}", j + 1);
        if x == seed.vars()[j] {
            good_bases.insert(factor);
            out.push(Instance::pass(key));
        } else {
            out.push(Instance::fail(key, "not an initial variable".into()));
        }
    }

    // Characters lie in the algebra generated by cluster variables.
    let modules = module_inventory(&cat, 3, 2);
    let injectives = injective_inventory(f.m(), 2);
    let mut objects = 0usize;
    for module in &modules {
        for inj in &injectives {
            let key = ObjKey { module: module.clone(), injectives: inj.clone() };
            let label = format!("object {}", ex.label(&key));
            objects += 1;
            let expr = match ex.express(&key) {
                Ok(e) => e,
                Err(Error::Verification(msg)) => {
                    out.push(Instance::fail(label, msg));
                    continue;
                }
                Err(Error::BudgetExceeded(msg)) => {
                    out.push(Instance::skipped(label, msg));
                    continue;
                }
                Err(e) => return Err(e),
            };
            if let Some(bad) = expr.factors().iter().find(|x| !good_bases.contains(x)) {
                out.push(Instance::fail(label, format!("base factor {bad} is not a cluster variable")));
                continue;
            }
            let lhs = ex.evaluate(&expr)?;
            let rhs = ex.character(&key)?;
            out.push(Instance::compare(label, lhs, rhs, p));
        }
    }

    // Cluster variables are characters.
    let n = f.n();
    let mut known: Vec<TorusElement> = Vec::new();
    for &k in cat.principal_indices() {
        known.push(ex.factor_value(&Factor::Module(k))?);
    }
    for j in 0..n {
        known.push(ex.factor_value(&Factor::Shift(j))?);
    }
    for (i, x) in variables.iter().enumerate() {
        let key = format!("variable {:02}", i + 1);
        if known.contains(x) {
            out.push(Instance::pass(key));
        } else {
            let mut inst = Instance::fail(key, "no indecomposable character matches".into());
            inst.lhs = Some(x.clone());
            out.push(inst);
        }
    }

    let mut report = Report::new("cluster-basis", f, p, out);
    report.summary.insert("objects".into(), json!(objects));
    report.summary.insert("cluster_variables".into(), json!(variables.len()));
    report.summary.insert("indecomposables".into(), json!(cat.principal_indices().len()));
    report.summary.insert("rewriting_edges".into(), json!(ex.edges()));
    Ok(report)
}
