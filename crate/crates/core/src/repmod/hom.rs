use crate::error::{Error, Result};
use crate::linalg::FpMatrix;

use super::{Quiver, Rep};

/// A morphism of representations: one matrix `dim N_i x dim M_i` per vertex.
pub type HomMap = Vec<FpMatrix>;

/// Column offsets of the unknowns `f_i[r][c]` in the intertwining system.
fn offsets(m: &Rep, n: &Rep) -> Vec<usize> {
    let mut out = Vec::with_capacity(m.dims().len() + 1);
    let mut acc = 0;
    out.push(0);
    for (a, b) in m.dims().iter().zip(n.dims()) {
        acc += a * b;
        out.push(acc);
    }
    out
}

/// Matrix of the linear map `Hom_0(M, N) -> Hom_1(M, N)`,
/// `(f_i) -> (N_a f_s - f_t M_a)_a`, in the unknowns `f_i[r][c]`.
pub(crate) fn intertwining_system(m: &Rep, n: &Rep) -> FpMatrix {
    let p = m.p();
    let q = m.quiver();
    let off = offsets(m, n);
    let eqs: usize = q.arrows().iter().map(|&(s, t)| n.dims()[t] * m.dims()[s]).sum();
    let mut sys = FpMatrix::zeros(p, eqs, *off.last().unwrap());
    let mut row = 0;
    for (a, &(s, t)) in q.arrows().iter().enumerate() {
        let (ms, mt) = (m.dims()[s], m.dims()[t]);
        let (ns, nt) = (n.dims()[s], n.dims()[t]);
        let (na, ma) = (n.map(a), m.map(a));
        for r in 0..nt {
            for c in 0..ms {
                for j in 0..ns {
                    let x = na.get(r, j);
                    if x != 0 {
                        let col = off[s] + j * ms + c;
                        sys.set(row, col, (sys.get(row, col) + x) % p);
                    }
                }
                for j in 0..mt {
                    let x = ma.get(j, c);
                    if x != 0 {
                        let col = off[t] + r * mt + j;
                        sys.set(row, col, (sys.get(row, col) + p - x) % p);
                    }
                }
                row += 1;
            }
        }
    }
    sys
}

/// Splits a flat unknown vector into per-vertex matrices.
pub(crate) fn unflatten(m: &Rep, n: &Rep, v: &[u32]) -> HomMap {
    let off = offsets(m, n);
    (0..m.dims().len())
        .map(|i| FpMatrix::from_vec(m.p(), n.dims()[i], m.dims()[i], v[off[i]..off[i + 1]].to_vec()))
        .collect()
}

/// A basis of `Hom(M, N)`.
pub fn hom_basis(m: &Rep, n: &Rep) -> Result<Vec<HomMap>> {
    m.check_compatible_with(n)?;
    let sys = intertwining_system(m, n);
    Ok(sys.nullspace().iter().map(|v| unflatten(m, n, v)).collect())
}

pub fn hom_dim(m: &Rep, n: &Rep) -> Result<usize> {
    m.check_compatible_with(n)?;
    let sys = intertwining_system(m, n);
    Ok(sys.cols() - sys.rank())
}

/// Euler form `<e, f> = Σ_i e_i f_i - Σ_{a: s->t} e_s f_t`.
pub fn euler_form(q: &Quiver, e: &[i64], f: &[i64]) -> Result<i64> {
    if e.len() != q.vertices() || f.len() != q.vertices() {
        return Err(Error::Dimension("Euler form needs vectors indexed by the vertices".into()));
    }
    let diag: i64 = e.iter().zip(f).map(|(a, b)| a * b).sum();
    let arrows: i64 = q.arrows().iter().map(|&(s, t)| e[s] * f[t]).sum();
    Ok(diag - arrows)
}

/// `dim Ext^1(M, N) = dim Hom(M, N) - <dim M, dim N>`.
pub fn ext_dim(m: &Rep, n: &Rep) -> Result<usize> {
    let h = hom_dim(m, n)? as i64;
    let e = h - euler_form(m.quiver(), &m.dim_vector(), &n.dim_vector())?;
    usize::try_from(e).map_err(|_| Error::Internal(format!("negative Ext dimension {e}")))
}

/// True when `f` intertwines the structure maps.
pub fn is_morphism(m: &Rep, n: &Rep, f: &HomMap) -> bool {
    m.quiver().arrows().iter().enumerate().all(|(a, &(s, t))| n.map(a).mul(&f[s]) == f[t].mul(m.map(a)))
}
