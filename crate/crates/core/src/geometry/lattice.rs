//! Face lattices of full-dimensional polytopes.
//!
//! Faces are identified by their vertex sets. Starting from the facets, the
//! faces one dimension down of a face F are the inclusion-maximal sets
//! F ∩ G over facets G not containing F.

use std::collections::HashMap;

use super::polytope::VPolytope;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceLattice {
    /// `faces[k]` lists the k-faces as sorted vertex-index sets.
    faces: Vec<Vec<Vec<usize>>>,
    /// `up[k][i]` lists the (k+1)-faces containing the i-th k-face.
    up: Vec<Vec<Vec<usize>>>,
}

impl FaceLattice {
    pub fn from_facets(p: &VPolytope) -> Self {
        let n = p.dim();
        let facets: Vec<Vec<usize>> = p.facets().iter().map(|f| f.vertices.clone()).collect();
        let mut faces: Vec<Vec<Vec<usize>>> = vec![Vec::new(); n];
        let mut up: Vec<Vec<Vec<usize>>> = vec![Vec::new(); n];
        faces[n - 1] = facets.clone();
        up[n - 1] = vec![Vec::new(); facets.len()];
        for k in (1..n).rev() {
            let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
            let mut lower: Vec<Vec<usize>> = Vec::new();
            let mut lower_up: Vec<Vec<usize>> = Vec::new();
            for (fi, face) in faces[k].iter().enumerate() {
                let subs: Vec<Vec<usize>> = if k == 1 {
                    face.iter().map(|&v| vec![v]).collect()
                } else {
                    maximal_intersections(face, &facets)
                };
                for s in subs {
                    let id = *index.entry(s.clone()).or_insert_with(|| {
                        lower.push(s);
                        lower_up.push(Vec::new());
                        lower.len() - 1
                    });
                    lower_up[id].push(fi);
                }
            }
            faces[k - 1] = lower;
            up[k - 1] = lower_up;
        }
        Self { faces, up }
    }

    pub fn dim(&self) -> usize {
        self.faces.len()
    }

    /// The k-faces, 0 <= k < dim.
    pub fn faces(&self, k: usize) -> &[Vec<usize>] {
        &self.faces[k]
    }

    /// Indices of the (k+1)-faces containing the i-th k-face.
    pub fn cofaces(&self, k: usize, i: usize) -> &[usize] {
        &self.up[k][i]
    }

    /// (f_0, ..., f_{n-1}).
    pub fn f_vector(&self) -> Vec<usize> {
        self.faces.iter().map(Vec::len).collect()
    }

    /// Number of maximal chains f_0 ⊂ f_1 ⊂ ... ⊂ f_{n-1}.
    pub fn flag_count(&self) -> u64 {
        let n = self.dim();
        let mut count: Vec<u64> = vec![1; self.faces[n - 1].len()];
        for k in (0..n - 1).rev() {
            count = self.up[k]
                .iter()
                .map(|ups| ups.iter().map(|&j| count[j]).sum())
                .collect();
        }
        count.iter().sum()
    }

    /// Σ (-1)^i f_i.
    pub fn euler_characteristic(&self) -> i64 {
        self.f_vector()
            .iter()
            .enumerate()
            .map(|(i, &f)| if i % 2 == 0 { f as i64 } else { -(f as i64) })
            .sum()
    }
}

fn maximal_intersections(face: &[usize], facets: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut cands: Vec<Vec<usize>> = facets
        .iter()
        .map(|g| face.iter().copied().filter(|v| g.binary_search(v).is_ok()).collect::<Vec<_>>())
        .filter(|s: &Vec<usize>| !s.is_empty() && s.len() < face.len())
        .collect();
    cands.sort_unstable_by(|a, b| b.len().cmp(&a.len()).then(a.cmp(b)));
    cands.dedup();
    let mut out: Vec<Vec<usize>> = Vec::new();
    for c in cands {
        let is_sub = out
            .iter()
            .any(|o| c.iter().all(|v| o.binary_search(v).is_ok()));
        if !is_sub {
            out.push(c);
        }
    }
    out
}
