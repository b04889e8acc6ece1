//! Problem instances: a vertex count plus symmetric edge weights.
//!
//! Two storage forms exist. Graphs whose weights are all `±1` are packed
//! into a pair of row-major bitplanes (edge-present mask and sign), which is
//! what the word-parallel delta-energy kernel operates on. General weighted
//! graphs use a symmetric CSR adjacency. The Ising couplings are
//! `J_ij = -w_ij`, so minimizing the Ising energy maximizes the cut.
//!
//! Edge-list files use the de-facto Gset layout: a header line `n m`
//! followed by `m` lines `i j w` with 1-based endpoints (indices are
//! 0-based everywhere in the API). `#` starts a comment line.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Write as _;

use rand_chacha::rand_core::RngCore;

use crate::bits::{WORD_BITS, words_for};
use crate::rng;
use crate::weight::Weight;

/// Dense sign-bitplane storage for `±1`-weighted graphs: one row-major
/// bitplane marking present edges and one holding their signs
/// (bit set = `+1`). Rows are padded with zero bits to whole 64-bit words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bitplanes {
    n: usize,
    words_per_row: usize,
    mask: Vec<u64>,
    sign: Vec<u64>,
    degree: Vec<u32>,
}

impl Bitplanes {
    fn zeros(n: usize) -> Self {
        let words_per_row = words_for(n);
        Self {
            n,
            words_per_row,
            mask: vec![0; n * words_per_row],
            sign: vec![0; n * words_per_row],
            degree: vec![0; n],
        }
    }

    /// Insert the undirected edge `(i, j)` with sign `plus`.
    fn set_edge(&mut self, i: usize, j: usize, plus: bool) {
        debug_assert!(i != j && i < self.n && j < self.n);
        for (a, b) in [(i, j), (j, i)] {
            let word = a * self.words_per_row + b / WORD_BITS;
            let bit = 1u64 << (b % WORD_BITS);
            debug_assert_eq!(self.mask[word] & bit, 0, "duplicate edge");
            self.mask[word] |= bit;
            if plus {
                self.sign[word] |= bit;
            }
            self.degree[a] += 1;
        }
    }

    #[inline]
    pub fn words_per_row(&self) -> usize {
        self.words_per_row
    }

    #[inline]
    pub fn row_mask(&self, i: usize) -> &[u64] {
        &self.mask[i * self.words_per_row..(i + 1) * self.words_per_row]
    }

    #[inline]
    pub fn row_sign(&self, i: usize) -> &[u64] {
        &self.sign[i * self.words_per_row..(i + 1) * self.words_per_row]
    }

    #[inline]
    pub fn degree(&self, i: usize) -> u32 {
        self.degree[i]
    }
}

/// Symmetric adjacency in CSR form (both directions stored, columns
/// ascending within each row).
#[derive(Clone, Debug, PartialEq)]
struct Csr<W> {
    offsets: Vec<usize>,
    cols: Vec<u32>,
    weights: Vec<W>,
}

impl<W: Weight> Csr<W> {
    /// `edges` must be sorted by `(i, j)` with `i < j`; inserting both
    /// directions in that order leaves every row's columns ascending.
    fn build(n: usize, edges: &[(usize, usize, W)]) -> Self {
        let mut offsets = vec![0usize; n + 1];
        for &(i, j, _) in edges {
            offsets[i + 1] += 1;
            offsets[j + 1] += 1;
        }
        for k in 0..n {
            offsets[k + 1] += offsets[k];
        }
        let total = offsets[n];
        let mut cols = vec![0u32; total];
        let mut weights = vec![W::ZERO; total];
        let mut cursor = offsets.clone();
        for &(i, j, w) in edges {
            for (a, b) in [(i, j), (j, i)] {
                cols[cursor[a]] = b as u32;
                weights[cursor[a]] = w;
                cursor[a] += 1;
            }
        }
        Self {
            offsets,
            cols,
            weights,
        }
    }

    #[inline]
    fn row(&self, i: usize) -> (&[u32], &[W]) {
        let r = self.offsets[i]..self.offsets[i + 1];
        (&self.cols[r.clone()], &self.weights[r])
    }
}

/// An Ising / MAX-CUT problem instance.
///
/// Immutable after construction; safe to share across concurrent trials.
#[derive(Clone, Debug)]
pub struct IsingInstance<W: Weight> {
    n: usize,
    m: u64,
    total_weight: W::Acc,
    csr: Option<Csr<W>>,
    planes: Option<Bitplanes>,
}

#[derive(Debug, PartialEq, Eq, thiserror::Error)]
pub enum InstanceError {
    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
    #[error("vertex index {index} out of range for n={n}")]
    VertexOutOfRange { index: usize, n: usize },
    #[error("self-loop at vertex {vertex}")]
    SelfLoop { vertex: usize },
    #[error("duplicate edge ({i}, {j})")]
    DuplicateEdge { i: usize, j: usize },
    #[error("non-finite edge weight")]
    NonFiniteWeight,
}

impl<W: Weight> IsingInstance<W> {
    /// Build an instance from undirected edges with 0-based endpoints.
    /// Listing either orientation of a pair twice is an error; zero-weight
    /// edges are dropped (absent edges have weight zero by convention).
    pub fn from_edges(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize, W)>,
    ) -> Result<Self, InstanceError> {
        if n == 0 {
            return Err(InstanceError::InvalidArgument("n must be at least 1"));
        }
        if n > u32::MAX as usize {
            return Err(InstanceError::InvalidArgument("n exceeds u32 range"));
        }
        let mut seen = BTreeSet::new();
        let mut list: Vec<(usize, usize, W)> = Vec::new();
        let mut all_unit = true;
        for (i, j, w) in edges {
            if i == j {
                return Err(InstanceError::SelfLoop { vertex: i });
            }
            for v in [i, j] {
                if v >= n {
                    return Err(InstanceError::VertexOutOfRange { index: v, n });
                }
            }
            let key = (i.min(j), i.max(j));
            if !seen.insert(key) {
                return Err(InstanceError::DuplicateEdge { i: key.0, j: key.1 });
            }
            if !w.as_f64().is_finite() {
                return Err(InstanceError::NonFiniteWeight);
            }
            if w == W::ZERO {
                continue;
            }
            all_unit &= w.is_unit();
            list.push((key.0, key.1, w));
        }
        list.sort_unstable_by_key(|&(i, j, _)| (i, j));

        let mut total = W::Acc::ZERO;
        for &(_, _, w) in &list {
            total += w.acc();
        }
        let m = list.len() as u64;

        if W::PACKED && all_unit {
            let mut planes = Bitplanes::zeros(n);
            for &(i, j, w) in &list {
                planes.set_edge(i, j, w == W::from_unit_sign(true));
            }
            Ok(Self {
                n,
                m,
                total_weight: total,
                csr: None,
                planes: Some(planes),
            })
        } else {
            Ok(Self {
                n,
                m,
                total_weight: total,
                csr: Some(Csr::build(n, &list)),
                planes: None,
            })
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of undirected edges with nonzero weight.
    #[inline]
    pub fn edge_count(&self) -> u64 {
        self.m
    }

    /// Total edge weight `W = sum of w_ij over i < j`.
    #[inline]
    pub fn total_weight(&self) -> W::Acc {
        self.total_weight
    }

    #[inline]
    pub fn planes(&self) -> Option<&Bitplanes> {
        self.planes.as_ref()
    }

    /// Populate the CSR adjacency from the bitplanes if absent. Both forms
    /// then describe identical weights, and CSR becomes the iteration path.
    pub fn materialize_csr(&mut self) {
        if self.csr.is_some() {
            return;
        }
        let edges: Vec<(usize, usize, W)> = self.edges().collect();
        self.csr = Some(Csr::build(self.n, &edges));
    }

    /// Neighbors of `i` with their weights, columns ascending.
    pub fn neighbors(&self, i: usize) -> NeighborIter<'_, W> {
        debug_assert!(i < self.n);
        let inner = if let Some(csr) = &self.csr {
            let (cols, weights) = csr.row(i);
            NeighborInner::Csr { cols, weights, k: 0 }
        } else {
            let planes = self.planes.as_ref().expect("instance has a storage form");
            let mask = planes.row_mask(i);
            NeighborInner::Planes {
                mask,
                sign: planes.row_sign(i),
                word_idx: 0,
                current: mask.first().copied().unwrap_or(0),
            }
        };
        NeighborIter { inner }
    }

    /// All undirected edges `(i, j, w)` with `i < j`, ascending by `(i, j)`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, W)> + '_ {
        (0..self.n).flat_map(move |i| {
            self.neighbors(i)
                .filter(move |&(j, _)| j > i)
                .map(move |(j, w)| (i, j, w))
        })
    }
}

enum NeighborInner<'a, W> {
    Csr {
        cols: &'a [u32],
        weights: &'a [W],
        k: usize,
    },
    Planes {
        mask: &'a [u64],
        sign: &'a [u64],
        word_idx: usize,
        current: u64,
    },
}

/// Iterator over `(neighbor, weight)` pairs of one vertex.
pub struct NeighborIter<'a, W> {
    inner: NeighborInner<'a, W>,
}

impl<W: Weight> Iterator for NeighborIter<'_, W> {
    type Item = (usize, W);

    fn next(&mut self) -> Option<(usize, W)> {
        match &mut self.inner {
            NeighborInner::Csr { cols, weights, k } => {
                if *k >= cols.len() {
                    return None;
                }
                let out = (cols[*k] as usize, weights[*k]);
                *k += 1;
                Some(out)
            }
            NeighborInner::Planes {
                mask,
                sign,
                word_idx,
                current,
            } => {
                while *current == 0 {
                    *word_idx += 1;
                    if *word_idx >= mask.len() {
                        return None;
                    }
                    *current = mask[*word_idx];
                }
                let bit = current.trailing_zeros() as usize;
                *current &= *current - 1;
                let j = *word_idx * WORD_BITS + bit;
                let plus = (sign[*word_idx] >> bit) & 1 == 1;
                Some((j, W::from_unit_sign(plus)))
            }
        }
    }
}

/// Generate a complete graph on `n` vertices with i.i.d. `±1` edge weights
/// (probability 1/2 each). Signs are taken as the low bit of one
/// `next_u64` per edge, edges enumerated `(i, j)` with `i < j`, `j`
/// ascending within `i`. Identical `(n, seed)` reproduce identical
/// instances bit for bit.
pub fn gen_complete_pm1(n: usize, seed: u64) -> Result<IsingInstance<i32>, InstanceError> {
    if n < 2 {
        return Err(InstanceError::InvalidArgument(
            "complete instance needs n >= 2",
        ));
    }
    if n > u32::MAX as usize {
        return Err(InstanceError::InvalidArgument("n exceeds u32 range"));
    }
    let mut rng = rng::rng_from_seed(seed);
    let mut planes = Bitplanes::zeros(n);
    let mut total: i64 = 0;
    for i in 0..n {
        for j in (i + 1)..n {
            let plus = rng.next_u64() & 1 == 1;
            planes.set_edge(i, j, plus);
            total += if plus { 1 } else { -1 };
        }
    }
    Ok(IsingInstance {
        n,
        m: (n as u64) * (n as u64 - 1) / 2,
        total_weight: total,
        csr: None,
        planes: Some(planes),
    })
}

/// An instance of either numeric class, as produced by the parser:
/// weights that are all `±1` load as the packed integer class, anything
/// else as general `f64`.
#[derive(Clone, Debug)]
pub enum AnyInstance {
    Int(IsingInstance<i32>),
    Real(IsingInstance<f64>),
}

impl AnyInstance {
    pub fn n(&self) -> usize {
        match self {
            AnyInstance::Int(inst) => inst.n(),
            AnyInstance::Real(inst) => inst.n(),
        }
    }

    pub fn edge_count(&self) -> u64 {
        match self {
            AnyInstance::Int(inst) => inst.edge_count(),
            AnyInstance::Real(inst) => inst.edge_count(),
        }
    }

    pub fn write_edge_list(&self) -> String {
        match self {
            AnyInstance::Int(inst) => write_edge_list(inst),
            AnyInstance::Real(inst) => write_edge_list(inst),
        }
    }
}

#[derive(Debug, PartialEq, Eq, Clone, Copy)]
pub enum ParseErrorKind {
    MissingHeader,
    MalformedHeader,
    MalformedEdge,
    VertexOutOfRange,
    SelfLoop,
    DuplicateEdge,
    NonFiniteWeight,
    MissingEdges,
    TrailingContent,
}

impl core::fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        let msg = match self {
            ParseErrorKind::MissingHeader => "missing `n m` header line",
            ParseErrorKind::MalformedHeader => "malformed header, expected `n m`",
            ParseErrorKind::MalformedEdge => "malformed edge, expected `i j w`",
            ParseErrorKind::VertexOutOfRange => "vertex index out of range [1, n]",
            ParseErrorKind::SelfLoop => "self-loop (i == j)",
            ParseErrorKind::DuplicateEdge => "duplicate edge",
            ParseErrorKind::NonFiniteWeight => "weight is not finite",
            ParseErrorKind::MissingEdges => "fewer edge lines than the header announced",
            ParseErrorKind::TrailingContent => "content after the announced edge count",
        };
        f.write_str(msg)
    }
}

#[derive(Debug, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

impl ParseError {
    fn at(line: usize, kind: ParseErrorKind) -> Self {
        Self { line, kind }
    }
}

/// Parse an edge-list text. Blank lines and lines starting with `#` are
/// skipped. 1-based file indices become 0-based. Weight values of exactly
/// `0` or `±1` across the whole file select the packed integer class.
pub fn parse_edge_list(text: &str) -> Result<AnyInstance, ParseError> {
    let mut header: Option<(usize, u64)> = None;
    let mut edges: Vec<(usize, usize, f64)> = Vec::new();
    let mut seen = BTreeSet::new();
    let mut all_unit = true;
    let mut line_count = 0usize;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        line_count = line;
        let s = raw.trim();
        if s.is_empty() || s.starts_with('#') {
            continue;
        }
        match header {
            None => {
                let mut it = s.split_whitespace();
                let n = it
                    .next()
                    .and_then(|t| t.parse::<usize>().ok())
                    .filter(|&n| n >= 1)
                    .ok_or(ParseError::at(line, ParseErrorKind::MalformedHeader))?;
                let m = it
                    .next()
                    .and_then(|t| t.parse::<u64>().ok())
                    .ok_or(ParseError::at(line, ParseErrorKind::MalformedHeader))?;
                if it.next().is_some() {
                    return Err(ParseError::at(line, ParseErrorKind::MalformedHeader));
                }
                header = Some((n, m));
            }
            Some((n, m)) => {
                if edges.len() as u64 >= m {
                    return Err(ParseError::at(line, ParseErrorKind::TrailingContent));
                }
                let mut it = s.split_whitespace();
                let i = it
                    .next()
                    .and_then(|t| t.parse::<usize>().ok())
                    .ok_or(ParseError::at(line, ParseErrorKind::MalformedEdge))?;
                let j = it
                    .next()
                    .and_then(|t| t.parse::<usize>().ok())
                    .ok_or(ParseError::at(line, ParseErrorKind::MalformedEdge))?;
                let w = it
                    .next()
                    .and_then(|t| t.parse::<f64>().ok())
                    .ok_or(ParseError::at(line, ParseErrorKind::MalformedEdge))?;
                if it.next().is_some() {
                    return Err(ParseError::at(line, ParseErrorKind::MalformedEdge));
                }
                if i < 1 || i > n || j < 1 || j > n {
                    return Err(ParseError::at(line, ParseErrorKind::VertexOutOfRange));
                }
                if i == j {
                    return Err(ParseError::at(line, ParseErrorKind::SelfLoop));
                }
                if !w.is_finite() {
                    return Err(ParseError::at(line, ParseErrorKind::NonFiniteWeight));
                }
                let key = (i.min(j), i.max(j));
                if !seen.insert(key) {
                    return Err(ParseError::at(line, ParseErrorKind::DuplicateEdge));
                }
                all_unit &= w == 0.0 || w == 1.0 || w == -1.0;
                edges.push((i - 1, j - 1, w));
            }
        }
    }

    let (n, m) = header.ok_or(ParseError::at(line_count + 1, ParseErrorKind::MissingHeader))?;
    if (edges.len() as u64) < m {
        return Err(ParseError::at(line_count + 1, ParseErrorKind::MissingEdges));
    }

    if all_unit {
        let ints = edges.into_iter().map(|(i, j, w)| (i, j, w as i32));
        let inst = IsingInstance::<i32>::from_edges(n, ints).expect("edge list pre-validated");
        Ok(AnyInstance::Int(inst))
    } else {
        let inst = IsingInstance::<f64>::from_edges(n, edges).expect("edge list pre-validated");
        Ok(AnyInstance::Real(inst))
    }
}

/// Canonical edge-list text: header `n m`, then one `i j w` line per edge
/// sorted by `(i, j)` with `i < j`, 1-based, no trailing newline.
/// `parse_edge_list` reads it back losslessly.
pub fn write_edge_list<W: Weight>(inst: &IsingInstance<W>) -> String {
    let mut out = String::new();
    let _ = write!(out, "{} {}", inst.n(), inst.edge_count());
    for (i, j, w) in inst.edges() {
        let _ = write!(out, "\n{} {} {}", i + 1, j + 1, w);
    }
    out
}
