//! Colimits of finite diagrams of sets or exact-rational spaces, computed
//! by explicit orbit (union-find) and coequalizer (rank reduction)
//! constructions. Objects are indexed 0..n with a carrier size each;
//! identifications are generated by an explicit list of maps.

use crate::error::{Error, Result};
use crate::linalg::{QuotientMap, RatMatrix};
use crate::module::MapData;
use crate::rational::Rat;
use num_traits::Zero;

pub struct Diagram {
    /// carrier size (Set) or dimension (Vect) per object
    pub sizes: Vec<usize>,
    /// generating morphisms: (source object, target object, elementwise map)
    pub generators: Vec<(usize, usize, MapData)>,
}

/// Colimit of a set-valued diagram: classes of the disjoint union under the
/// identifications generated by the diagram's maps. Class ids are assigned
/// in increasing order of their least member (object, element).
#[derive(Debug, Clone)]
pub struct SetColimit {
    pub sizes: Vec<usize>,
    offsets: Vec<usize>,
    class_of_flat: Vec<usize>,
    /// least (object, element) per class
    pub reps: Vec<(usize, usize)>,
}

impl SetColimit {
    pub fn n_classes(&self) -> usize {
        self.reps.len()
    }

    pub fn class_of(&self, object: usize, elem: usize) -> usize {
        self.class_of_flat[self.offsets[object] + elem]
    }

    /// All (object, element) members of a class.
    pub fn members(&self, class: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for obj in 0..self.sizes.len() {
            for e in 0..self.sizes[obj] {
                if self.class_of(obj, e) == class {
                    out.push((obj, e));
                }
            }
        }
        out
    }
}

pub fn set_colimit(diagram: &Diagram) -> SetColimit {
    let mut offsets = Vec::with_capacity(diagram.sizes.len());
    let mut total = 0;
    for &s in &diagram.sizes {
        offsets.push(total);
        total += s;
    }
    let mut parent: Vec<usize> = (0..total).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut root = x;
        while parent[root] != root {
            root = parent[root];
        }
        let mut cur = x;
        while parent[cur] != root {
            let next = parent[cur];
            parent[cur] = root;
            cur = next;
        }
        root
    }
    for (src, dst, map) in &diagram.generators {
        let table = match map {
            MapData::Set(t) => t,
            MapData::Vect(_) => panic!("set colimit needs set maps"),
        };
        debug_assert_eq!(table.len(), diagram.sizes[*src]);
        for (e, &img) in table.iter().enumerate() {
            let a = find(&mut parent, offsets[*src] + e);
            let b = find(&mut parent, offsets[*dst] + img);
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    // classes ordered by least flat member
    let mut class_ids: Vec<usize> = vec![usize::MAX; total];
    let mut reps = Vec::new();
    let mut class_of_flat = vec![0; total];
    for x in 0..total {
        let r = find(&mut parent, x);
        if class_ids[r] == usize::MAX {
            class_ids[r] = reps.len();
            let obj = offsets.partition_point(|&o| o <= r) - 1;
            reps.push((obj, r - offsets[obj]));
        }
        class_of_flat[x] = class_ids[r];
    }
    SetColimit {
        sizes: diagram.sizes.clone(),
        offsets,
        class_of_flat,
        reps,
    }
}

/// Colimit (coequalizer) of a vector-space diagram: the direct sum modulo
/// the span of `inject(M e) − inject(e)` over all generators and basis
/// vectors. Exact rational throughout.
#[derive(Debug, Clone)]
pub struct VectColimit {
    pub dims: Vec<usize>,
    offsets: Vec<usize>,
    pub quotient: QuotientMap,
    pub generator_count: usize,
}

impl VectColimit {
    pub fn dim(&self) -> usize {
        self.quotient.quotient_dim()
    }

    pub fn ambient_dim(&self) -> usize {
        self.quotient.ambient_dim
    }

    /// Class of a vector supported on one object.
    pub fn project(&self, object: usize, v: &[Rat]) -> Vec<Rat> {
        let mut ambient = vec![Rat::zero(); self.quotient.ambient_dim];
        ambient[self.offsets[object]..self.offsets[object] + v.len()].clone_from_slice(v);
        self.quotient.project(&ambient)
    }

    pub fn project_basis(&self, object: usize, i: usize) -> Vec<Rat> {
        let mut v = vec![Rat::zero(); self.dims[object]];
        v[i] = Rat::new(1.into(), 1.into());
        self.project(object, &v)
    }
}

pub fn vect_colimit(diagram: &Diagram) -> Result<VectColimit> {
    let mut offsets = Vec::with_capacity(diagram.sizes.len());
    let mut total = 0;
    for &s in &diagram.sizes {
        offsets.push(total);
        total += s;
    }
    if total > 4000 {
        return Err(Error::BoundExceeded(format!(
            "vector-space colimit with ambient dimension {total}"
        )));
    }
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    for (src, dst, map) in &diagram.generators {
        let m = match map {
            MapData::Vect(m) => m,
            MapData::Set(_) => panic!("vector colimit needs matrices"),
        };
        debug_assert_eq!(m.cols, diagram.sizes[*src]);
        debug_assert_eq!(m.rows, diagram.sizes[*dst]);
        for e in 0..m.cols {
            let mut row = vec![Rat::zero(); total];
            for r in 0..m.rows {
                if !m[(r, e)].is_zero() {
                    row[offsets[*dst] + r] = m[(r, e)].clone();
                }
            }
            row[offsets[*src] + e] -= Rat::new(1.into(), 1.into());
            if row.iter().any(|x| !x.is_zero()) {
                rows.push(row);
            }
        }
    }
    let generator_count = rows.len();
    let relations = if rows.is_empty() {
        RatMatrix::zero(0, total)
    } else {
        RatMatrix::from_rows(rows)
    };
    let quotient = QuotientMap::new(total, &relations);
    // internal consistency: dim(colimit) = dim(generators) − rank(relations)
    assert_eq!(quotient.quotient_dim(), total - quotient.rank());
    Ok(VectColimit {
        dims: diagram.sizes.clone(),
        offsets,
        quotient,
        generator_count,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat_int;

    #[test]
    fn set_colimit_orbits() {
        // two objects of size 2 with a swap map between them: classes pair up
        let d = Diagram {
            sizes: vec![2, 2],
            generators: vec![(0, 1, MapData::Set(vec![1, 0]))],
        };
        let c = set_colimit(&d);
        assert_eq!(c.n_classes(), 2);
        assert_eq!(c.class_of(0, 0), c.class_of(1, 1));
        assert_eq!(c.class_of(0, 1), c.class_of(1, 0));
        assert_ne!(c.class_of(0, 0), c.class_of(0, 1));
        assert_eq!(c.reps[0], (0, 0));
    }

    #[test]
    fn vect_colimit_sign_action_kills_space() {
        // one object Q^1 with the generator −id: coinvariants are 0
        let mut neg = RatMatrix::identity(1);
        neg[(0, 0)] = rat_int(-1);
        let d = Diagram {
            sizes: vec![1],
            generators: vec![(0, 0, MapData::Vect(neg))],
        };
        let c = vect_colimit(&d).unwrap();
        assert_eq!(c.dim(), 0);
    }

    #[test]
    fn vect_colimit_trivial_action_keeps_space() {
        let d = Diagram {
            sizes: vec![2],
            generators: vec![(0, 0, MapData::Vect(RatMatrix::identity(2)))],
        };
        let c = vect_colimit(&d).unwrap();
        assert_eq!(c.dim(), 2);
    }

    #[test]
    fn vect_colimit_swap_identifies() {
        // swap on Q^2: coinvariants 1-dimensional, e0 and e1 agree
        let swap = RatMatrix::permutation(&[1, 0]);
        let d = Diagram {
            sizes: vec![2],
            generators: vec![(0, 0, MapData::Vect(swap))],
        };
        let c = vect_colimit(&d).unwrap();
        assert_eq!(c.dim(), 1);
        assert_eq!(c.project_basis(0, 0), c.project_basis(0, 1));
    }
}
