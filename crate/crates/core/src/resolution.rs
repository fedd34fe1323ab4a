//! Compatible small resolutions and the defo / exoflop / flop graph.

use std::fmt;

use num::BigUint;
use serde::{Deserialize, Serialize};

use crate::cohomology::{self, CohomologyError, ConifoldData, TOP_DEGREE};

/// Largest class count accepted for enumeration.
pub const MAX_CLASSES: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ResolutionError {
    #[error(transparent)]
    Cohomology(#[from] CohomologyError),
    #[error("{0} classes would need 2^{0} resolutions (limit {MAX_CLASSES})")]
    TooManyClasses(usize),
    #[error("class index {k} outside 1..={len}")]
    ClassOutOfRange { k: usize, len: usize },
}

/// One orientation bit per 4-cycle class; bit `k-1` is class `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ResolutionChoice {
    bits: u32,
    len: usize,
}

impl ResolutionChoice {
    pub fn new(orientation: &[u8]) -> Result<Self, ResolutionError> {
        if orientation.len() > MAX_CLASSES {
            return Err(ResolutionError::TooManyClasses(orientation.len()));
        }
        let bits = orientation
            .iter()
            .enumerate()
            .fold(0u32, |acc, (k, &b)| acc | (u32::from(b & 1) << k));
        Ok(Self {
            bits,
            len: orientation.len(),
        })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn orientation(&self) -> Vec<u8> {
        (0..self.len).map(|k| ((self.bits >> k) & 1) as u8).collect()
    }

    /// Orientation of each node, taken from its class.
    pub fn node_orientations(&self, classes: &[Vec<usize>], n: usize) -> Vec<u8> {
        let o = self.orientation();
        let mut out = vec![0; n];
        for (k, class) in classes.iter().enumerate() {
            for &j in class {
                out[j - 1] = o[k];
            }
        }
        out
    }

    pub fn hamming(&self, other: &Self) -> u32 {
        (self.bits ^ other.bits).count_ones()
    }

    /// 1-based position among the `2^N` choices.
    pub fn index(&self) -> usize {
        self.bits as usize + 1
    }
}

impl fmt::Display for ResolutionChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let o: Vec<String> = self.orientation().iter().map(ToString::to_string).collect();
        write!(f, "({})", o.join(","))
    }
}

/// Flips the orientation of class `k` (1-based).
pub fn flop(c: &ResolutionChoice, k: usize) -> Result<ResolutionChoice, ResolutionError> {
    if k == 0 || k > c.len {
        return Err(ResolutionError::ClassOutOfRange { k, len: c.len });
    }
    Ok(ResolutionChoice {
        bits: c.bits ^ (1 << (k - 1)),
        len: c.len,
    })
}

/// Lazy enumeration of all `2^N` choices.
#[derive(Debug, Clone)]
pub struct Resolutions {
    next: u64,
    end: u64,
    len: usize,
}

impl Iterator for Resolutions {
    type Item = ResolutionChoice;

    fn next(&mut self) -> Option<ResolutionChoice> {
        (self.next < self.end).then(|| {
            let c = ResolutionChoice {
                bits: self.next as u32,
                len: self.len,
            };
            self.next += 1;
            c
        })
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let r = (self.end - self.next) as usize;
        (r, Some(r))
    }
}

impl ExactSizeIterator for Resolutions {}

pub fn enumerate_small_resolutions(data: &ConifoldData) -> Result<Resolutions, ResolutionError> {
    data.validate()?;
    let len = data.class_count();
    if len > MAX_CLASSES {
        return Err(ResolutionError::TooManyClasses(len));
    }
    Ok(Resolutions {
        next: 0,
        end: 1 << len,
        len,
    })
}

/// `2^n`, the count if every node were resolved independently.
pub fn naive_resolution_count(n: usize) -> BigUint {
    BigUint::from(1u8) << n
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeKind {
    Defo,
    Exoflop,
    Flop,
}

impl fmt::Display for EdgeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EdgeKind::Defo => "defo",
            EdgeKind::Exoflop => "exoflop",
            EdgeKind::Flop => "flop",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VertexKind {
    /// Transversal case: nothing to resolve or smooth.
    Smooth,
    Smoothing,
    Closure,
    Resolution(ResolutionChoice),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vertex {
    pub kind: VertexKind,
    pub dims: Option<[usize; TOP_DEGREE + 1]>,
}

impl Vertex {
    pub fn name(&self) -> String {
        match self.kind {
            VertexKind::Smooth => "M_smooth".to_string(),
            VertexKind::Smoothing => "M_flat".to_string(),
            VertexKind::Closure => "V_bar".to_string(),
            VertexKind::Resolution(c) => format!("M_res_{}", c.index()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    pub kind: EdgeKind,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionGraph {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
    /// Flop edges for more than one class go beyond the single flopped pair.
    pub hypercube_extension: bool,
}

const DEFO_NOTE: &str = "each node replaced by a real 3-bundle over S^3";

pub fn build_transition_graph(data: &ConifoldData) -> Result<TransitionGraph, ResolutionError> {
    let resolutions: Vec<ResolutionChoice> = enumerate_small_resolutions(data)?.collect();
    let closure_dims = cohomology::cohomology_of_closure(data)?.dims;
    if data.n == 0 {
        return Ok(TransitionGraph {
            vertices: vec![Vertex {
                kind: VertexKind::Smooth,
                dims: Some(closure_dims),
            }],
            edges: Vec::new(),
            hypercube_extension: false,
        });
    }
    let mut vertices = vec![
        Vertex {
            kind: VertexKind::Smoothing,
            dims: data.smooth_dims,
        },
        Vertex {
            kind: VertexKind::Closure,
            dims: Some(closure_dims),
        },
    ];
    let mut edges = vec![Edge {
        a: 0,
        b: 1,
        kind: EdgeKind::Defo,
        note: Some(DEFO_NOTE.to_string()),
    }];
    let offset = vertices.len();
    for c in &resolutions {
        vertices.push(Vertex {
            kind: VertexKind::Resolution(*c),
            // the exceptional curves add N classes to H^2, as for V̄
            dims: Some(closure_dims),
        });
    }
    for i in 0..resolutions.len() {
        edges.push(Edge {
            a: 1,
            b: offset + i,
            kind: EdgeKind::Exoflop,
            note: None,
        });
    }
    for (i, c) in resolutions.iter().enumerate() {
        for k in 1..=c.len() {
            let j = flop(c, k)?.bits as usize;
            if i < j {
                edges.push(Edge {
                    a: offset + i,
                    b: offset + j,
                    kind: EdgeKind::Flop,
                    note: Some(format!("class {k}")),
                });
            }
        }
    }
    Ok(TransitionGraph {
        vertices,
        edges,
        hypercube_extension: data.class_count() > 1,
    })
}

impl TransitionGraph {
    pub fn edges_of(&self, kind: EdgeKind) -> impl Iterator<Item = &Edge> {
        self.edges.iter().filter(move |e| e.kind == kind)
    }

    pub fn degree(&self, v: usize, kind: EdgeKind) -> usize {
        self.edges_of(kind).filter(|e| e.a == v || e.b == v).count()
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph transitions {\n");
        for v in &self.vertices {
            let label = match v.kind {
                VertexKind::Resolution(c) => format!("{} {}", v.name(), c),
                _ => v.name(),
            };
            out.push_str(&format!("  {} [label=\"{label}\"];\n", v.name()));
        }
        for e in &self.edges {
            out.push_str(&format!(
                "  {} -- {} [label=\"{}\"];\n",
                self.vertices[e.a].name(),
                self.vertices[e.b].name(),
                e.kind
            ));
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson {
            vertices: self
                .vertices
                .iter()
                .map(|v| VertexJson {
                    name: v.name(),
                    orientation: match v.kind {
                        VertexKind::Resolution(c) => Some(c.orientation()),
                        _ => None,
                    },
                    dims: v.dims,
                })
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeJson {
                    from: self.vertices[e.a].name(),
                    to: self.vertices[e.b].name(),
                    kind: e.kind,
                    note: e.note.clone(),
                })
                .collect(),
            hypercube_extension: self.hypercube_extension,
        }
    }

    pub fn report(&self) -> String {
        let count = |k| self.edges_of(k).count();
        let mut out = format!(
            "{} vertices, {} edges ({} defo, {} exoflop, {} flop)\n",
            self.vertices.len(),
            self.edges.len(),
            count(EdgeKind::Defo),
            count(EdgeKind::Exoflop),
            count(EdgeKind::Flop)
        );
        if self.hypercube_extension {
            out.push_str("flop edges for several classes form a hypercube (extension)\n");
        }
        for e in &self.edges {
            out.push_str(&format!(
                "  {} -{}- {}\n",
                self.vertices[e.a].name(),
                e.kind,
                self.vertices[e.b].name()
            ));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexJson {
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub orientation: Option<Vec<u8>>,
    pub dims: Option<[usize; TOP_DEGREE + 1]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeJson {
    pub from: String,
    pub to: String,
    pub kind: EdgeKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub vertices: Vec<VertexJson>,
    pub edges: Vec<EdgeJson>,
    pub hypercube_extension: bool,
}
