//! Bundle graphs: which elements go into which bundle.
//!
//! A bundle graph is a simple `k`-regular bipartite graph with `n` element
//! nodes (side U) and `n` bundle nodes (side V). U-nodes are mapped to actual
//! elements by a random permutation, and bundles to graders by a perfect
//! matching that keeps every student away from their own element; see
//! [`assign`].

use std::fmt::Write as _;
use std::io::{BufRead, Write};

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::matching::perfect_matching;

/// Simple `k`-regular bipartite graph. Adjacency lists are kept sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BundleGraph {
    k: usize,
    adj_bundles: Vec<Vec<usize>>,
    adj_elements: Vec<Vec<usize>>,
}

impl BundleGraph {
    /// Builds the graph from the element-node lists of each bundle.
    pub fn from_bundles(bundles: Vec<Vec<usize>>) -> Result<Self> {
        let n = bundles.len();
        if n == 0 {
            return Err(Error::InvalidGraph("no bundles".into()));
        }
        let k = bundles[0].len();
        let mut adj_bundles = vec![Vec::with_capacity(k); n];
        let mut adj_elements = Vec::with_capacity(n);
        for (v, mut members) in bundles.into_iter().enumerate() {
            if members.len() != k {
                return Err(Error::InvalidGraph(format!(
                    "bundle {v} has {} elements, expected {k}",
                    members.len()
                )));
            }
            members.sort_unstable();
            if members.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidGraph(format!("bundle {v} repeats an element")));
            }
            for &u in &members {
                if u >= n {
                    return Err(Error::InvalidGraph(format!("bundle {v} names node {u} >= {n}")));
                }
                adj_bundles[u].push(v);
            }
            adj_elements.push(members);
        }
        if let Some(u) = adj_bundles.iter().position(|b| b.len() != k) {
            return Err(Error::InvalidGraph(format!(
                "element node {u} has degree {}, expected {k}",
                adj_bundles[u].len()
            )));
        }
        Ok(Self { k, adj_bundles, adj_elements })
    }

    /// Disjoint union; node indices of later parts are shifted.
    pub fn disjoint_union(parts: &[BundleGraph]) -> Result<Self> {
        let mut bundles = Vec::new();
        let mut base = 0;
        for g in parts {
            bundles.extend(g.adj_elements.iter().map(|b| b.iter().map(|u| u + base).collect()));
            base += g.n();
        }
        Self::from_bundles(bundles)
    }

    pub fn n(&self) -> usize {
        self.adj_elements.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Element nodes of bundle `v`.
    pub fn bundle(&self, v: usize) -> &[usize] {
        &self.adj_elements[v]
    }

    pub fn bundles(&self) -> &[Vec<usize>] {
        &self.adj_elements
    }

    /// Bundles containing element node `u`.
    pub fn bundles_of(&self, u: usize) -> &[usize] {
        &self.adj_bundles[u]
    }

    /// Connected components as sorted lists of element nodes.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.n();
        let mut comp = vec![usize::MAX; n];
        let mut out = Vec::new();
        for start in 0..n {
            if comp[start] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![start];
            comp[start] = id;
            let mut i = 0;
            while i < members.len() {
                let u = members[i];
                i += 1;
                for &v in &self.adj_bundles[u] {
                    for &w in &self.adj_elements[v] {
                        if comp[w] == usize::MAX {
                            comp[w] = id;
                            members.push(w);
                        }
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    /// Text dump: header `n k`, then `bundle_id: u_1 ... u_k` per bundle.
    pub fn to_dump(&self) -> String {
        let mut s = format!("{} {}\n", self.n(), self.k);
        for (v, b) in self.adj_elements.iter().enumerate() {
            let _ = write!(s, "{v}:");
            for u in b {
                let _ = write!(s, " {u}");
            }
            s.push('\n');
        }
        s
    }

    pub fn write_dump<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(self.to_dump().as_bytes())?;
        Ok(())
    }

    pub fn read_dump<R: BufRead>(r: R) -> Result<Self> {
        let mut lines = r.lines();
        let header = lines.next().ok_or_else(|| Error::InvalidGraph("empty dump".into()))??;
        let mut it = header.split_whitespace().map(str::parse::<usize>);
        let (n, k) = match (it.next(), it.next(), it.next()) {
            (Some(Ok(n)), Some(Ok(k)), None) => (n, k),
            _ => return Err(Error::InvalidGraph(format!("bad header line {header:?}"))),
        };
        let mut bundles = vec![None; n];
        for line in lines {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let (id, rest) = line
                .split_once(':')
                .ok_or_else(|| Error::InvalidGraph(format!("missing ':' in {line:?}")))?;
            let v: usize = id
                .trim()
                .parse()
                .map_err(|_| Error::InvalidGraph(format!("bad bundle id in {line:?}")))?;
            let members = rest
                .split_whitespace()
                .map(str::parse::<usize>)
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| Error::InvalidGraph(format!("bad element list in {line:?}")))?;
            let slot = bundles
                .get_mut(v)
                .ok_or_else(|| Error::InvalidGraph(format!("bundle id {v} >= {n}")))?;
            if slot.replace(members).is_some() {
                return Err(Error::InvalidGraph(format!("bundle {v} listed twice")));
            }
        }
        let bundles = bundles
            .into_iter()
            .enumerate()
            .map(|(v, b)| b.ok_or_else(|| Error::InvalidGraph(format!("bundle {v} missing"))))
            .collect::<Result<Vec<_>>>()?;
        let g = Self::from_bundles(bundles)?;
        if g.k != k {
            return Err(Error::InvalidGraph(format!("header says k={k}, bundles have {}", g.k)));
        }
        Ok(g)
    }
}

/// Union of `k` random perfect matchings of `K_{n,n}`, drawn one after the
/// other. Each upper node in turn takes a uniformly random edge among those
/// still present whose lower end is unused in the current matching; used
/// edges are removed, so the result is simple. If some upper node has no
/// edge left, the whole construction restarts. Gives up after `10·k·n`
/// restarts.
pub fn random_k_regular<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Result<BundleGraph> {
    if k == 0 || k > n {
        return Err(Error::InvalidParameter(format!("need 1 <= k <= n, got n={n}, k={k}")));
    }
    let budget = 10 * k * n;
    let mut restarts = 0;
    let mut free: Vec<usize> = Vec::with_capacity(n);
    let mut scratch: Vec<usize> = Vec::with_capacity(n);
    'construction: loop {
        let mut upper: Vec<Vec<usize>> = vec![Vec::with_capacity(k); n];
        for _ in 0..k {
            free.clear();
            free.extend(0..n);
            for nbrs in upper.iter_mut() {
                let pick = pick_unused(&free, nbrs, rng, &mut scratch);
                match pick {
                    Some(i) => {
                        nbrs.push(free.swap_remove(i));
                    }
                    None => {
                        restarts += 1;
                        if restarts > budget {
                            return Err(Error::RestartBudgetExceeded { n, k, budget });
                        }
                        continue 'construction;
                    }
                }
            }
        }
        let mut bundles = vec![Vec::with_capacity(k); n];
        for (u, nbrs) in upper.iter().enumerate() {
            for &v in nbrs {
                bundles[v].push(u);
            }
        }
        return BundleGraph::from_bundles(bundles);
    }
}

/// Index into `free` of a uniformly random lower node not in `taken`.
fn pick_unused<R: Rng + ?Sized>(
    free: &[usize],
    taken: &[usize],
    rng: &mut R,
    scratch: &mut Vec<usize>,
) -> Option<usize> {
    if free.is_empty() {
        return None;
    }
    // A few rejection rounds, then an exact scan; both are uniform over the
    // allowed set.
    for _ in 0..8 {
        let i = rng.gen_range(0..free.len());
        if !taken.contains(&free[i]) {
            return Some(i);
        }
    }
    scratch.clear();
    scratch.extend((0..free.len()).filter(|&i| !taken.contains(&free[i])));
    scratch.choose(rng).copied()
}

pub fn is_prime(p: usize) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

/// The order-revealing `(p²+p+1, p+1)` bundle graph for `p` prime (or 1).
///
/// Element nodes: `u = 0`, `v_i = 1 + i`, `w_{i,j} = 1 + p + i·p + j`.
/// Bundles in this order: `F = {u, v_0..v_{p-1}}`, `R_i = {u} ∪ {w_{i,j}}`,
/// then `C_{i,s} = {v_s} ∪ {w_{j,(i + j·s) mod p}}` at index `1 + p + i·p + s`.
/// For `p = 1` this is the 6-cycle.
pub fn girth6_construction(p: usize) -> Result<BundleGraph> {
    if p != 1 && !is_prime(p) {
        return Err(Error::InvalidParameter(format!("p={p} must be 1 or a prime")));
    }
    let v = |i: usize| 1 + i;
    let w = |i: usize, j: usize| 1 + p + i * p + j;
    let mut bundles = Vec::with_capacity(p * p + p + 1);
    bundles.push(std::iter::once(0).chain((0..p).map(v)).collect::<Vec<_>>());
    for i in 0..p {
        bundles.push(std::iter::once(0).chain((0..p).map(|j| w(i, j))).collect());
    }
    for i in 0..p {
        for s in 0..p {
            bundles.push(std::iter::once(v(s)).chain((0..p).map(|j| w(j, (i + j * s) % p))).collect());
        }
    }
    BundleGraph::from_bundles(bundles)
}

/// `target_n / (p²+p+1)` disjoint copies of [`girth6_construction`].
pub fn girth6_copies(target_n: usize, p: usize) -> Result<BundleGraph> {
    let unit = girth6_construction(p)?;
    let size = unit.n();
    if target_n == 0 || target_n % size != 0 {
        return Err(Error::InvalidParameter(format!(
            "n={target_n} is not a positive multiple of p²+p+1={size}"
        )));
    }
    BundleGraph::disjoint_union(&vec![unit; target_n / size])
}

/// Complete bipartite `K_{k,k}`.
pub fn complete_bipartite(k: usize) -> Result<BundleGraph> {
    circulant(k, k)
}

/// `r` nodes per side, U-node `i` adjacent to V-nodes `i, i+1, …, i+k-1 (mod r)`.
pub fn circulant(r: usize, k: usize) -> Result<BundleGraph> {
    if k == 0 || k > r {
        return Err(Error::InvalidParameter(format!("circulant needs 1 <= k <= r, got r={r}, k={k}")));
    }
    let mut bundles = vec![Vec::with_capacity(k); r];
    for u in 0..r {
        for t in 0..k {
            bundles[(u + t) % r].push(u);
        }
    }
    BundleGraph::from_bundles(bundles)
}

/// `m` copies of `K_{k,k}` plus, when `k ∤ n`, one circulant `k`-regular
/// component on the remaining `r ≥ k` nodes per side.
pub fn kkk_copies(n: usize, k: usize) -> Result<BundleGraph> {
    if k == 0 || k > n {
        return Err(Error::InvalidParameter(format!("need 1 <= k <= n, got n={n}, k={k}")));
    }
    let mut m = n / k;
    let mut r = n - m * k;
    while r != 0 && r < k {
        if m == 0 {
            return Err(Error::InvalidParameter(format!("cannot split n={n} for k={k}")));
        }
        m -= 1;
        r += k;
    }
    let mut parts = vec![complete_bipartite(k)?; m];
    if r > 0 {
        parts.push(circulant(r, k)?);
    }
    BundleGraph::disjoint_union(&parts)
}

/// Element placement and bundle-to-grader wiring for one execution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    pi: Vec<usize>,
    node_of: Vec<usize>,
    grader_of: Vec<usize>,
}

impl Assignment {
    /// Validates `pi` (U-node → element) and `grader_of` (bundle → student).
    pub fn new(graph: &BundleGraph, pi: Vec<usize>, grader_of: Vec<usize>) -> Result<Self> {
        let n = graph.n();
        let invert = |map: &[usize], what: &str| -> Result<Vec<usize>> {
            if map.len() != n {
                return Err(Error::InvalidParameter(format!("{what} has wrong length")));
            }
            let mut inv = vec![usize::MAX; n];
            for (i, &x) in map.iter().enumerate() {
                if x >= n || inv[x] != usize::MAX {
                    return Err(Error::InvalidParameter(format!("{what} is not a bijection")));
                }
                inv[x] = i;
            }
            Ok(inv)
        };
        let node_of = invert(&pi, "element permutation")?;
        invert(&grader_of, "grader matching")?;
        for (v, &s) in grader_of.iter().enumerate() {
            if graph.bundle(v).contains(&node_of[s]) {
                return Err(Error::InvalidParameter(format!("student {s} would grade their own element")));
            }
        }
        Ok(Self { pi, node_of, grader_of })
    }

    /// Element placed at U-node `u`.
    pub fn element_at(&self, u: usize) -> usize {
        self.pi[u]
    }

    pub fn node_of(&self, element: usize) -> usize {
        self.node_of[element]
    }

    pub fn grader_of(&self, bundle: usize) -> usize {
        self.grader_of[bundle]
    }

    pub fn pi(&self) -> &[usize] {
        &self.pi
    }

    /// Actual elements in bundle `v`.
    pub fn bundle_elements(&self, graph: &BundleGraph, v: usize) -> Vec<usize> {
        graph.bundle(v).iter().map(|&u| self.pi[u]).collect()
    }
}

/// Random element placement plus a grader matching, both from `rng`.
pub fn assign<R: Rng + ?Sized>(graph: &BundleGraph, rng: &mut R) -> Result<Assignment> {
    let pi = random_permutation(graph.n(), rng);
    assign_with_permutation(graph, pi, rng)
}

pub fn random_permutation<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<usize> {
    let mut pi: Vec<usize> = (0..n).collect();
    pi.shuffle(rng);
    pi
}

/// Grader matching for a given placement `pi`, found by augmenting paths in
/// the `(n-k)`-regular "may grade" graph.
pub fn assign_with_permutation<R: Rng + ?Sized>(
    graph: &BundleGraph,
    pi: Vec<usize>,
    rng: &mut R,
) -> Result<Assignment> {
    let n = graph.n();
    if graph.k() >= n {
        return Err(Error::InvalidParameter(format!(
            "k={} >= n={n}: every bundle contains every element",
            graph.k()
        )));
    }
    let mut node_of = vec![0; n];
    for (u, &e) in pi.iter().enumerate() {
        node_of[e] = u;
    }
    let grader_of = perfect_matching(n, |s| graph.bundles_of(node_of[s]).to_vec(), rng)
        .ok_or_else(|| Error::Invariant("no perfect grader matching in a regular graph".into()))?;
    Assignment::new(graph, pi, grader_of)
}

/// Sparse common-neighbour counts `λ_{u,z}` for every element node.
#[derive(Debug, Clone)]
pub struct CommonNeighbors {
    /// For each `u`: `(z, λ_{u,z})` for `z ≠ u` with `λ_{u,z} > 0`, sorted by `z`.
    lists: Vec<Vec<(usize, u32)>>,
}

impl CommonNeighbors {
    pub fn new(graph: &BundleGraph) -> Self {
        let n = graph.n();
        let mut count = vec![0u32; n];
        let mut touched = Vec::new();
        let lists = (0..n)
            .map(|u| {
                for &v in graph.bundles_of(u) {
                    for &z in graph.bundle(v) {
                        if z != u {
                            if count[z] == 0 {
                                touched.push(z);
                            }
                            count[z] += 1;
                        }
                    }
                }
                touched.sort_unstable();
                let list = touched.iter().map(|&z| (z, count[z])).collect();
                for &z in &touched {
                    count[z] = 0;
                }
                touched.clear();
                list
            })
            .collect();
        Self { lists }
    }

    pub fn n(&self) -> usize {
        self.lists.len()
    }

    /// Nodes at distance two from `u` with their common-neighbour counts.
    pub fn of(&self, u: usize) -> &[(usize, u32)] {
        &self.lists[u]
    }

    pub fn lambda(&self, u: usize, v: usize) -> u32 {
        let list = &self.lists[u];
        list.binary_search_by_key(&v, |&(z, _)| z).map_or(0, |i| list[i].1)
    }

    /// Writes `θ_{u,v}` for every `v ≠ u` into `out`; `out[u]` is left 0.
    ///
    /// With `A_x = Σ_z λ_{x,z}²`, the sum over `z ∉ {u,v}` expands to
    /// `A_u − λ_{u,v}² + A_v − λ_{u,v}² + 2·Σ_z λ_{u,z}·λ_{v,z}`.
    fn theta_row(&self, u: usize, sq: &[u64], dense: &mut [u32], cross: &mut [u64], out: &mut [u64]) {
        let n = self.n();
        for &(z, l) in self.of(u) {
            dense[z] = l;
        }
        let mut touched = Vec::new();
        for &(z, luz) in self.of(u) {
            for &(v, lzv) in self.of(z) {
                if v != u {
                    if cross[v] == 0 {
                        touched.push(v);
                    }
                    cross[v] += u64::from(luz) * u64::from(lzv);
                }
            }
        }
        for v in 0..n {
            if v == u {
                out[v] = 0;
                continue;
            }
            let l = u64::from(dense[v]);
            out[v] = 4 * (sq[u] + sq[v] - 2 * l * l + 2 * cross[v]);
        }
        for &(z, _) in self.of(u) {
            dense[z] = 0;
        }
        for v in touched {
            cross[v] = 0;
        }
    }

    fn squares(&self) -> Vec<u64> {
        self.lists
            .iter()
            .map(|l| l.iter().map(|&(_, x)| u64::from(x) * u64::from(x)).sum())
            .collect()
    }

    /// `θ_{u,v} = 4·Σ_{z ∈ N(N(u,v)) \ {u,v}} (λ_{u,z} + λ_{v,z})²`.
    pub fn theta(&self, u: usize, v: usize) -> u64 {
        let a = self.of(u);
        let b = self.of(v);
        let (mut i, mut j, mut total) = (0, 0, 0u64);
        while i < a.len() || j < b.len() {
            let za = a.get(i).map_or(usize::MAX, |x| x.0);
            let zb = b.get(j).map_or(usize::MAX, |x| x.0);
            let z = za.min(zb);
            let mut s = 0u64;
            if za == z {
                s += u64::from(a[i].1);
                i += 1;
            }
            if zb == z {
                s += u64::from(b[j].1);
                j += 1;
            }
            if z != u && z != v {
                total += s * s;
            }
        }
        4 * total
    }

    /// Calls `f(u, v, θ_{u,v})` for every ordered pair `u ≠ v`.
    pub fn for_each_theta<F: FnMut(usize, usize, u64)>(&self, mut f: F) {
        let n = self.n();
        let sq = self.squares();
        let mut dense = vec![0u32; n];
        let mut cross = vec![0u64; n];
        let mut row = vec![0u64; n];
        for u in 0..n {
            self.theta_row(u, &sq, &mut dense, &mut cross, &mut row);
            for (v, &t) in row.iter().enumerate() {
                if v != u {
                    f(u, v, t);
                }
            }
        }
    }
}

fn check_pair(graph: &BundleGraph, u: usize, v: usize) -> Result<()> {
    let n = graph.n();
    if u >= n || v >= n {
        return Err(Error::InvalidParameter(format!("node out of range 0..{n}")));
    }
    if u == v {
        return Err(Error::InvalidParameter(format!("λ/θ need distinct nodes, got u=v={u}")));
    }
    Ok(())
}

/// `λ_{u,v} = |N(u) ∩ N(v)|`.
pub fn lambda(graph: &BundleGraph, u: usize, v: usize) -> Result<usize> {
    check_pair(graph, u, v)?;
    let (a, b) = (graph.bundles_of(u), graph.bundles_of(v));
    let (mut i, mut j, mut c) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                c += 1;
                i += 1;
                j += 1;
            }
        }
    }
    Ok(c)
}

pub fn theta(graph: &BundleGraph, u: usize, v: usize) -> Result<u64> {
    check_pair(graph, u, v)?;
    Ok(CommonNeighbors::new(graph).theta(u, v))
}

/// `η(G)`: the mean of `√θ_{u,v}` over all `n(n-1)` ordered pairs.
pub fn eta(graph: &BundleGraph) -> f64 {
    eta_from(&CommonNeighbors::new(graph))
}

pub fn eta_from(cn: &CommonNeighbors) -> f64 {
    let n = cn.n();
    if n < 2 {
        return 0.0;
    }
    let mut sum = 0.0;
    cn.for_each_theta(|_, _, t| sum += (t as f64).sqrt());
    sum / (n * (n - 1)) as f64
}

/// Every pair of elements shares at least one bundle.
pub fn is_order_revealing(graph: &BundleGraph) -> bool {
    let cn = CommonNeighbors::new(graph);
    (0..graph.n()).all(|u| cn.of(u).len() == graph.n() - 1)
}

/// No 4-cycles: no two element nodes share two bundles and no two bundles
/// share two elements.
pub fn girth_at_least_6(graph: &BundleGraph) -> bool {
    let cn = CommonNeighbors::new(graph);
    let elements_ok = (0..graph.n()).all(|u| cn.of(u).iter().all(|&(_, l)| l <= 1));
    let n = graph.n();
    let mut count = vec![0u32; n];
    let bundles_ok = (0..n).all(|v| {
        let mut ok = true;
        let mut touched = Vec::new();
        for &u in graph.bundle(v) {
            for &w in graph.bundles_of(u) {
                if w != v {
                    count[w] += 1;
                    touched.push(w);
                    ok &= count[w] <= 1;
                }
            }
        }
        for w in touched {
            count[w] = 0;
        }
        ok
    });
    elements_ok && bundles_ok
}
