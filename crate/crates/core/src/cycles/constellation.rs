use std::cmp::Ordering;
use std::collections::VecDeque;

use rug::{Complex, Float};

use crate::config::Config;
use crate::error::{Error, Result};
use crate::monodromy::{critical_points, transport, MonodromyRep};
use crate::numeric::{abs_f64, dist, polish, roots, CPoly};

/// A preimage of a critical value.
#[derive(Clone, Debug)]
pub struct MarkedVertex {
    pub point: Complex,
    pub multiplicity: usize,
}

/// The constellation of P: one star per branch over the base point, whose rays run to
/// the critical values and end at the preimage the branch reaches there.
#[derive(Clone, Debug)]
pub struct Constellation {
    pub degree: usize,
    pub star_center: Complex,
    pub rays: Vec<Complex>,
    /// vertices[s]: the distinct preimages of ray value s.
    pub vertices: Vec<Vec<MarkedVertex>>,
    /// stars[i][s]: index into vertices[s] reached by branch i.
    pub stars: Vec<Vec<usize>>,
}

impl Constellation {
    pub fn vertex_count(&self) -> usize {
        self.degree + self.vertices.iter().map(Vec::len).sum::<usize>()
    }

    pub fn edge_count(&self) -> usize {
        self.degree * self.rays.len()
    }

    /// Global id of marked vertex k over ray s; star centers take ids 0..n.
    pub fn marked_id(&self, s: usize, k: usize) -> usize {
        self.degree + self.vertices[..s].iter().map(Vec::len).sum::<usize>() + k
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (i, star) in self.stars.iter().enumerate() {
            for (s, &k) in star.iter().enumerate() {
                out.push((i, self.marked_id(s, k)));
            }
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        let v = self.vertex_count();
        let mut adj = vec![Vec::new(); v];
        for (a, b) in self.edges() {
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut seen = vec![false; v];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(u) = queue.pop_front() {
            for &w in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Faces of the embedded graph on the sphere, by Euler's formula.
    pub fn face_count(&self) -> i64 {
        2 - self.vertex_count() as i64 + self.edge_count() as i64
    }

    pub fn vertex_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertex_count()];
        for (a, b) in self.edges() {
            deg[a] += 1;
            deg[b] += 1;
        }
        deg
    }
}

/// Distinct preimages of the critical value `c`.
fn preimages(rep: &MonodromyRep, c: &Complex, prec: u32) -> Result<Vec<MarkedVertex>> {
    let p = &rep.polynomial;
    let n = rep.degree();
    let tol = 1e-20 * (1.0 + abs_f64(c));
    let mut multiple: Vec<MarkedVertex> = critical_points(p, prec)?
        .into_iter()
        .filter(|cp| dist(&cp.value, c) < tol)
        .map(|cp| MarkedVertex { point: cp.point, multiplicity: cp.multiplicity + 1 })
        .collect();
    let mut approx = roots(&CPoly::shifted(p, c, prec), false)?;
    for mv in &multiple {
        for _ in 0..mv.multiplicity {
            let (k, _) = approx
                .iter()
                .enumerate()
                .map(|(k, x)| (k, dist(x, &mv.point)))
                .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(Ordering::Equal))
                .ok_or_else(|| Error::Consistency("preimage count mismatch".into()))?;
            approx.swap_remove(k);
        }
    }
    let poly = CPoly::from_rat(p, prec);
    for x in approx {
        let (y, _) = polish(&poly, c, &x, 40)
            .ok_or_else(|| Error::Tracking("simple preimage did not converge".into()))?;
        multiple.push(MarkedVertex { point: y, multiplicity: 1 });
    }
    if multiple.iter().map(|m| m.multiplicity).sum::<usize>() != n {
        return Err(Error::Consistency("preimage multiplicities do not add up to the degree".into()));
    }
    multiple.sort_by(|a, b| {
        a.point
            .real()
            .partial_cmp(b.point.real())
            .unwrap_or(Ordering::Equal)
            .then(a.point.imag().partial_cmp(b.point.imag()).unwrap_or(Ordering::Equal))
    });
    Ok(multiple)
}

pub fn build_constellation(rep: &MonodromyRep, cfg: &Config) -> Result<Constellation> {
    let n = rep.degree();
    let prec = rep.precision_bits;
    let geometry = rep.geometry();
    let mut vertices = Vec::new();
    let mut stars = vec![Vec::new(); n];
    for (s, c) in rep.critical_values.iter().enumerate() {
        let verts = preimages(rep, c, prec)?;
        let sep = (0..verts.len())
            .flat_map(|a| (0..verts.len()).filter(move |&b| b != a).map(move |b| (a, b)))
            .map(|(a, b)| dist(&verts[a].point, &verts[b].point))
            .fold(f64::INFINITY, f64::min);
        let mut path = geometry.approach(s);
        let standoff = path.last().expect("nonempty").clone();
        let offset = Complex::with_val(prec, &standoff - c);
        let mut assignment = None;
        for step in 0..60 {
            let fiber = transport(rep, &path, cfg)?;
            let nearest: Vec<(usize, f64)> = fiber
                .iter()
                .map(|x| {
                    verts
                        .iter()
                        .enumerate()
                        .map(|(k, v)| (k, dist(x, &v.point)))
                        .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(Ordering::Equal))
                        .expect("nonempty")
                })
                .collect();
            if nearest.iter().all(|&(_, d)| d < 0.25 * sep) {
                assignment = Some(nearest.into_iter().map(|(k, _)| k).collect::<Vec<_>>());
                break;
            }
            let shrink = Float::with_val(prec, Float::i_exp(1, -(step + 1)));
            path.push(Complex::with_val(prec, c + Complex::with_val(prec, &offset * &shrink)));
        }
        let assignment = assignment
            .ok_or_else(|| Error::Tracking("branches do not settle on preimages of a critical value".into()))?;
        for (k, v) in verts.iter().enumerate() {
            let hits = assignment.iter().filter(|&&a| a == k).count();
            if hits != v.multiplicity {
                return Err(Error::Consistency(format!(
                    "{hits} branches reach a preimage of multiplicity {}",
                    v.multiplicity
                )));
            }
        }
        for (i, k) in assignment.into_iter().enumerate() {
            stars[i].push(k);
        }
        vertices.push(verts);
    }
    Ok(Constellation {
        degree: n,
        star_center: rep.base_point.clone(),
        rays: rep.critical_values.clone(),
        vertices,
        stars,
    })
}
