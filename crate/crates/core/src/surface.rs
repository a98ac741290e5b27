//! Combinatorial maps on closed orientable surfaces: `2E` darts, a rotation
//! whose cycles are the vertices, and a fixed-point-free involution pairing
//! the two darts of each edge. Faces are the cycles of `rotation ∘ pairing`.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MapError {
    #[error("invalid map JSON: {0}")]
    Json(String),
    #[error("expected an even, positive number of darts with permutations of that length, got {0}")]
    Shape(usize),
    #[error("{0} is not a permutation of the darts")]
    NotPermutation(&'static str),
    #[error("pairing fixes dart {0}")]
    FixedPoint(usize),
    #[error("pairing is not an involution at dart {0}")]
    NotInvolution(usize),
    #[error("map is not connected")]
    Disconnected,
    #[error("a face has degree 1 or 2")]
    PropertyB2,
    #[error("cannot build a connected map with {vertices} vertices and {edges} edges")]
    Infeasible { vertices: usize, edges: usize },
    #[error("faces do not describe a closed oriented surface: {0}")]
    BadFaces(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CombinatorialMap {
    darts: usize,
    rotation: Vec<usize>,
    pairing: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EdgeBoundReport {
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub euler_characteristic: i64,
    /// `3(V - chi)`.
    pub bound: i64,
    pub slack: i64,
    pub holds: bool,
}

impl CombinatorialMap {
    pub fn new(rotation: Vec<usize>, pairing: Vec<usize>) -> Result<CombinatorialMap, MapError> {
        let map = CombinatorialMap {
            darts: rotation.len(),
            rotation,
            pairing,
        };
        map.validate()?;
        Ok(map)
    }

    pub fn from_json(text: &str) -> Result<CombinatorialMap, MapError> {
        let map: CombinatorialMap = serde_json::from_str(text).map_err(|e| MapError::Json(e.to_string()))?;
        map.validate()?;
        Ok(map)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("maps serialize")
    }

    /// Builds the map whose faces are the given closed walks, each listed by
    /// its vertices in the order of the surface orientation. Every directed
    /// edge must occur in exactly one face, together with its reverse, so
    /// multiple edges cannot be described this way.
    pub fn from_oriented_faces(faces: &[Vec<usize>]) -> Result<CombinatorialMap, MapError> {
        let mut dart_of: HashMap<(usize, usize), usize> = HashMap::new();
        let mut next_in_face = Vec::new();
        for face in faces {
            if face.is_empty() {
                return Err(MapError::BadFaces("empty face".into()));
            }
            let first = next_in_face.len();
            for (k, &u) in face.iter().enumerate() {
                let v = face[(k + 1) % face.len()];
                if dart_of.insert((u, v), first + k).is_some() {
                    return Err(MapError::BadFaces(format!("directed edge {u}->{v} repeats")));
                }
                next_in_face.push(first + (k + 1) % face.len());
            }
        }
        let mut pairing = vec![0; next_in_face.len()];
        for (&(u, v), &d) in &dart_of {
            let &back = dart_of
                .get(&(v, u))
                .ok_or_else(|| MapError::BadFaces(format!("edge {u}->{v} has no reverse")))?;
            if back == d {
                return Err(MapError::BadFaces(format!("loop at {u} listed once")));
            }
            pairing[d] = back;
        }
        let rotation = (0..pairing.len()).map(|d| next_in_face[pairing[d]]).collect();
        CombinatorialMap::new(rotation, pairing)
    }

    pub fn validate(&self) -> Result<(), MapError> {
        let n = self.darts;
        if n == 0 || n % 2 == 1 || self.rotation.len() != n || self.pairing.len() != n {
            return Err(MapError::Shape(n));
        }
        for (name, perm) in [("rotation", &self.rotation), ("pairing", &self.pairing)] {
            let mut seen = vec![false; n];
            for &d in perm {
                if d >= n || std::mem::replace(&mut seen[d], true) {
                    return Err(MapError::NotPermutation(name));
                }
            }
        }
        for d in 0..n {
            if self.pairing[d] == d {
                return Err(MapError::FixedPoint(d));
            }
            if self.pairing[self.pairing[d]] != d {
                return Err(MapError::NotInvolution(d));
            }
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut reached = 1;
        while let Some(d) = stack.pop() {
            for e in [self.rotation[d], self.pairing[d]] {
                if !seen[e] {
                    seen[e] = true;
                    reached += 1;
                    stack.push(e);
                }
            }
        }
        if reached != n {
            return Err(MapError::Disconnected);
        }
        Ok(())
    }

    pub fn darts(&self) -> usize {
        self.darts
    }

    pub fn rotation(&self) -> &[usize] {
        &self.rotation
    }

    pub fn pairing(&self) -> &[usize] {
        &self.pairing
    }

    fn cycles(&self, step: impl Fn(usize) -> usize) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.darts];
        let mut out = Vec::new();
        for start in 0..self.darts {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut d = start;
            while !seen[d] {
                seen[d] = true;
                cycle.push(d);
                d = step(d);
            }
            out.push(cycle);
        }
        out
    }

    pub fn vertices(&self) -> Vec<Vec<usize>> {
        self.cycles(|d| self.rotation[d])
    }

    pub fn faces(&self) -> Vec<Vec<usize>> {
        self.cycles(|d| self.rotation[self.pairing[d]])
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices().len()
    }

    pub fn edge_count(&self) -> usize {
        self.darts / 2
    }

    pub fn face_degrees(&self) -> Vec<usize> {
        self.faces().iter().map(Vec::len).collect()
    }

    /// `V - E + F`.
    pub fn euler_characteristic(&self) -> i64 {
        self.vertex_count() as i64 - self.edge_count() as i64 + self.faces().len() as i64
    }

    /// No face of degree 1 or 2.
    pub fn check_property_b2(&self) -> bool {
        self.face_degrees().iter().all(|&d| d >= 3)
    }

    /// `E <= 3(V - chi)`, for maps satisfying property B2.
    pub fn verify_edge_bound(&self) -> Result<EdgeBoundReport, MapError> {
        if !self.check_property_b2() {
            return Err(MapError::PropertyB2);
        }
        let vertices = self.vertex_count();
        let edges = self.edge_count();
        let faces = self.faces().len();
        let chi = vertices as i64 - edges as i64 + faces as i64;
        let bound = 3 * (vertices as i64 - chi);
        Ok(EdgeBoundReport {
            vertices,
            edges,
            faces,
            euler_characteristic: chi,
            bound,
            slack: bound - edges as i64,
            holds: edges as i64 <= bound,
        })
    }
}

/// A connected map with the given counts: a random spanning tree, random
/// extra edges (loops and multiple edges allowed), and a random cyclic
/// order of darts around each vertex. Deterministic in `seed`.
pub fn random_map(seed: u64, vertices: usize, edges: usize) -> Result<CombinatorialMap, MapError> {
    if vertices == 0 || edges == 0 || edges + 1 < vertices {
        return Err(MapError::Infeasible { vertices, edges });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ends = Vec::with_capacity(edges);
    for v in 1..vertices {
        ends.push((rng.gen_range(0..v), v));
    }
    while ends.len() < edges {
        ends.push((rng.gen_range(0..vertices), rng.gen_range(0..vertices)));
    }
    let mut at: Vec<Vec<usize>> = vec![Vec::new(); vertices];
    let mut pairing = vec![0; 2 * edges];
    for (e, &(u, v)) in ends.iter().enumerate() {
        at[u].push(2 * e);
        at[v].push(2 * e + 1);
        pairing[2 * e] = 2 * e + 1;
        pairing[2 * e + 1] = 2 * e;
    }
    let mut rotation = vec![0; 2 * edges];
    for darts in &mut at {
        darts.shuffle(&mut rng);
        for (k, &d) in darts.iter().enumerate() {
            rotation[d] = darts[(k + 1) % darts.len()];
        }
    }
    CombinatorialMap::new(rotation, pairing)
}

/// Aggregate of an edge-bound sweep over consecutive seeds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EdgeBoundSweep {
    pub first_seed: u64,
    pub maps: usize,
    /// Maps with property B2, to which the bound applies.
    pub tested: usize,
    pub failures: Vec<u64>,
    pub min_slack: Option<i64>,
    pub min_euler_characteristic: Option<i64>,
}

/// Sizes for seed `s`: `V` in `1..=max_vertices`, `E` in `max(V-1,1)..=3V+2`.
pub fn sweep_map(seed: u64, max_vertices: usize) -> CombinatorialMap {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_5eed_5eed_5eed);
    let vertices = rng.gen_range(1..=max_vertices.max(1));
    let edges = rng.gen_range((vertices - 1).max(1)..=3 * vertices + 2);
    random_map(seed, vertices, edges).expect("feasible sizes")
}

pub fn edge_bound_sweep(first_seed: u64, count: usize, max_vertices: usize) -> EdgeBoundSweep {
    let reports: Vec<(u64, Option<EdgeBoundReport>)> = (0..count as u64)
        .into_par_iter()
        .map(|k| {
            let seed = first_seed + k;
            (seed, sweep_map(seed, max_vertices).verify_edge_bound().ok())
        })
        .collect();
    let tested: Vec<(u64, EdgeBoundReport)> = reports.into_iter().filter_map(|(s, r)| r.map(|r| (s, r))).collect();
    EdgeBoundSweep {
        first_seed,
        maps: count,
        tested: tested.len(),
        failures: tested.iter().filter(|(_, r)| !r.holds).map(|(s, _)| *s).collect(),
        min_slack: tested.iter().map(|(_, r)| r.slack).min(),
        min_euler_characteristic: tested.iter().map(|(_, r)| r.euler_characteristic).min(),
    }
}

/// `K4` drawn on the sphere.
pub fn planar_k4() -> CombinatorialMap {
    CombinatorialMap::from_oriented_faces(&[vec![0, 2, 1], vec![0, 1, 3], vec![0, 3, 2], vec![1, 2, 3]])
        .expect("tetrahedron")
}

/// The icosahedron on the sphere, faces oriented outward.
pub fn icosahedron() -> CombinatorialMap {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let mut points = Vec::new();
    for s in [-1.0, 1.0] {
        for t in [-1.0, 1.0] {
            points.push([0.0, s, t * phi]);
            points.push([s, t * phi, 0.0]);
            points.push([t * phi, 0.0, s]);
        }
    }
    let dist2 = |a: [f64; 3], b: [f64; 3]| (0..3).map(|k| (a[k] - b[k]).powi(2)).sum::<f64>();
    let adjacent = |a: usize, b: usize| (dist2(points[a], points[b]) - 4.0).abs() < 1e-9;
    let mut faces = Vec::new();
    for a in 0..12 {
        for b in a + 1..12 {
            for c in b + 1..12 {
                if !(adjacent(a, b) && adjacent(b, c) && adjacent(a, c)) {
                    continue;
                }
                let (p, q, r) = (points[a], points[b], points[c]);
                let u = [q[0] - p[0], q[1] - p[1], q[2] - p[2]];
                let v = [r[0] - p[0], r[1] - p[1], r[2] - p[2]];
                let normal = [
                    u[1] * v[2] - u[2] * v[1],
                    u[2] * v[0] - u[0] * v[2],
                    u[0] * v[1] - u[1] * v[0],
                ];
                let outward: f64 = (0..3).map(|k| normal[k] * (p[k] + q[k] + r[k])).sum();
                faces.push(if outward > 0.0 { vec![a, b, c] } else { vec![a, c, b] });
            }
        }
    }
    CombinatorialMap::from_oriented_faces(&faces).expect("icosahedron")
}
