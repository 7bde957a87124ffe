use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::{subspace_count, FpMatrix, Subspace};

use super::hom::HomMap;
use super::Rep;

/// Default cap on the product of per-vertex subspace counts.
pub const DEFAULT_SUBSPACE_BUDGET: u64 = 2_000_000;

/// A subrepresentation together with its quotient.
#[derive(Clone, Debug)]
pub struct Submodule {
    pub spaces: Vec<Subspace>,
    pub sub: Rep,
    pub quotient: Rep,
}

impl Submodule {
    pub fn dims(&self) -> Vec<usize> {
        self.spaces.iter().map(Subspace::dim).collect()
    }
}

fn is_closed(m: &Rep, spaces: &[Option<Subspace>], v: usize) -> bool {
    let q = m.quiver();
    let u = spaces[v].as_ref().expect("assigned");
    for a in q.out_arrows(v) {
        let t = q.arrows()[a].1;
        if let Some(ut) = &spaces[t] {
            if u.basis().iter().any(|b| !ut.contains(&m.map(a).mul_vec(b))) {
                return false;
            }
        }
    }
    for a in q.in_arrows(v) {
        let s = q.arrows()[a].0;
        if let Some(us) = &spaces[s] {
            if us.basis().iter().any(|b| !u.contains(&m.map(a).mul_vec(b))) {
                return false;
            }
        }
    }
    true
}

fn check_budget(m: &Rep, budget: u64) -> Result<()> {
    let mut total: u64 = 1;
    for &d in m.dims() {
        let here: u64 = (0..=d as u32).map(|k| subspace_count(m.p() as u64, d as u32, k)).sum();
        total = total.saturating_mul(here);
    }
    if total > budget {
        return Err(Error::BudgetExceeded(format!(
            "{total} candidate subspace tuples exceed the budget {budget}"
        )));
    }
    Ok(())
}

/// Calls `visit` on every subrepresentation, given as per-vertex subspaces.
/// Subspaces are assigned in topological order and each choice is checked
/// against the already assigned neighbours, so only closed tuples survive.
fn for_each_closed(
    m: &Rep,
    dims: Option<&[usize]>,
    budget: u64,
    visit: &mut dyn FnMut(&[Subspace]) -> Result<()>,
) -> Result<()> {
    check_budget(m, budget)?;
    let order = m.quiver().topological_order()?;
    let choices: Vec<Vec<Subspace>> = (0..m.dims().len())
        .map(|v| match dims {
            Some(e) => Subspace::enumerate_dim(m.p(), m.dims()[v], e[v]),
            None => Subspace::enumerate_all(m.p(), m.dims()[v]),
        })
        .collect();
    let mut spaces: Vec<Option<Subspace>> = vec![None; m.dims().len()];
    fn go(
        m: &Rep,
        order: &[usize],
        k: usize,
        choices: &[Vec<Subspace>],
        spaces: &mut Vec<Option<Subspace>>,
        visit: &mut dyn FnMut(&[Subspace]) -> Result<()>,
    ) -> Result<()> {
        if k == order.len() {
            let done: Vec<Subspace> = spaces.iter().map(|s| s.clone().expect("assigned")).collect();
            return visit(&done);
        }
        let v = order[k];
        for u in &choices[v] {
            spaces[v] = Some(u.clone());
            if is_closed(m, spaces, v) {
                go(m, order, k + 1, choices, spaces, visit)?;
            }
        }
        spaces[v] = None;
        Ok(())
    }
    go(m, &order, 0, &choices, &mut spaces, visit)
}

/// Materializes the subrepresentation on `spaces` and the quotient by it.
/// Fails unless the tuple is closed under every arrow.
pub fn sub_and_quotient(m: &Rep, spaces: &[Subspace]) -> Result<(Rep, Rep)> {
    let q = m.quiver();
    let p = m.p();
    if spaces.len() != m.dims().len() || spaces.iter().zip(m.dims()).any(|(u, &d)| u.ambient() != d) {
        return Err(Error::Dimension("subspace tuple does not match the representation".into()));
    }
    let comps: Vec<Vec<usize>> = spaces.iter().map(Subspace::complement_coords).collect();
    let mut sub_maps = Vec::with_capacity(q.arrows().len());
    let mut quo_maps = Vec::with_capacity(q.arrows().len());
    for (a, &(s, t)) in q.arrows().iter().enumerate() {
        let ma = m.map(a);
        let mut sm = FpMatrix::zeros(p, spaces[t].dim(), spaces[s].dim());
        for (c, b) in spaces[s].basis().iter().enumerate() {
            let img = ma.mul_vec(b);
            if !spaces[t].contains(&img) {
                return Err(Error::Domain("subspace tuple is not closed under the arrows".into()));
            }
            for (r, x) in spaces[t].coords(&img).into_iter().enumerate() {
                sm.set(r, c, x);
            }
        }
        // Quotient basis at a vertex: standard vectors on the non-pivot
        // coordinates; reducing by the subspace leaves exactly those entries.
        let mut qm = FpMatrix::zeros(p, comps[t].len(), comps[s].len());
        for (c, &j) in comps[s].iter().enumerate() {
            let mut e = vec![0u32; m.dims()[s]];
            e[j] = 1;
            let img = spaces[t].reduce(&ma.mul_vec(&e));
            for (r, &i) in comps[t].iter().enumerate() {
                qm.set(r, c, img[i]);
            }
        }
        sub_maps.push(sm);
        quo_maps.push(qm);
    }
    let sub = Rep::new(Arc::clone(q), p, spaces.iter().map(Subspace::dim).collect(), sub_maps)?;
    let quo = Rep::new(Arc::clone(q), p, comps.iter().map(Vec::len).collect(), quo_maps)?;
    Ok((sub, quo))
}

/// Every subrepresentation of `m` with its quotient.
pub fn submodules(m: &Rep, budget: u64) -> Result<Vec<Submodule>> {
    let mut out = Vec::new();
    for_each_closed(m, None, budget, &mut |spaces| {
        let (sub, quotient) = sub_and_quotient(m, spaces)?;
        out.push(Submodule { spaces: spaces.to_vec(), sub, quotient });
        Ok(())
    })?;
    Ok(out)
}

/// Number of subrepresentations per dimension vector.
pub fn submodule_dim_counts(m: &Rep, budget: u64) -> Result<BTreeMap<Vec<usize>, u64>> {
    let mut out = BTreeMap::new();
    for_each_closed(m, None, budget, &mut |spaces| {
        *out.entry(spaces.iter().map(Subspace::dim).collect()).or_insert(0) += 1;
        Ok(())
    })?;
    Ok(out)
}

/// `|Gr_e(M)|`: the number of subrepresentations of dimension vector `e`.
pub fn grassmannian_count(m: &Rep, e: &[usize], budget: u64) -> Result<u64> {
    if e.len() != m.dims().len() {
        return Err(Error::Dimension("dimension vector length mismatch".into()));
    }
    if e.iter().zip(m.dims()).any(|(a, b)| a > b) {
        return Ok(0);
    }
    let mut count = 0;
    for_each_closed(m, Some(e), budget, &mut |_| {
        count += 1;
        Ok(())
    })?;
    Ok(count)
}

/// Kernel of a morphism `f: M -> N`, as a subrepresentation of `M`.
pub fn kernel(m: &Rep, f: &HomMap) -> Result<Rep> {
    let spaces: Vec<Subspace> = f.iter().map(FpMatrix::kernel).collect();
    Ok(sub_and_quotient(m, &spaces)?.0)
}

/// Cokernel of a morphism `f: M -> N`, as a quotient of `N`.
pub fn cokernel(n: &Rep, f: &HomMap) -> Result<Rep> {
    let spaces: Vec<Subspace> = f.iter().map(FpMatrix::column_space).collect();
    Ok(sub_and_quotient(n, &spaces)?.1)
}
