//! Admissible walks between ±n and their weights.
//!
//! A walk of kind X goes from −n to n, Y from n to −n, W from n back to n.
//! Its steps are even nonzero frequencies of the potential and its interior
//! vertices must avoid ±n. The weight of a walk x with ν+1 steps is
//!
//! h(x, z) = ∏_{t=1}^{ν+1} V(x(t)) · ∏_{t=1}^{ν} (n² − j(t)² + z)^{−1},
//!
//! where j(t) are the partial sums started at the initial vertex.
//!
//! For a two-term potential the walks with a fixed number of negative steps
//! −2R and positive steps 2S form a finite shell. Shell sums are computed by
//! a dynamic program over the (negative, positive) count grid, which is
//! polynomial in the shell size even when the shell holds millions of walks.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use rug::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{binomial, ExactScalar, Field};
use crate::potential::{FourierPotential, TwoTermParams};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum WalkKind {
    /// −n → n, feeding β⁺.
    X,
    /// n → −n, feeding β⁻.
    Y,
    /// n → n, feeding α.
    W,
}

impl WalkKind {
    pub fn start(self, n: u64) -> i64 {
        match self {
            WalkKind::X => -(n as i64),
            WalkKind::Y | WalkKind::W => n as i64,
        }
    }

    pub fn end(self, n: u64) -> i64 {
        match self {
            WalkKind::X | WalkKind::W => n as i64,
            WalkKind::Y => -(n as i64),
        }
    }

    /// Required sum of all steps.
    pub fn displacement(self, n: u64) -> i64 {
        self.end(n) - self.start(n)
    }
}

impl fmt::Display for WalkKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            WalkKind::X => "X",
            WalkKind::Y => "Y",
            WalkKind::W => "W",
        };
        f.write_str(s)
    }
}

/// A validated admissible walk.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Walk {
    steps: Vec<i64>,
    kind: WalkKind,
    n: u64,
}

impl Walk {
    pub fn new(steps: Vec<i64>, kind: WalkKind, n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("walk index n must be positive".into()));
        }
        if steps.is_empty() {
            return Err(Error::Domain("a walk has at least one step".into()));
        }
        if let Some(bad) = steps.iter().find(|x| **x == 0 || **x % 2 != 0) {
            return Err(Error::Domain(format!("step {bad} is not an even nonzero integer")));
        }
        if steps.iter().sum::<i64>() != kind.displacement(n) {
            return Err(Error::Domain(format!("steps do not sum to {}", kind.displacement(n))));
        }
        let walk = Self { steps, kind, n };
        let v = walk.vertices();
        let ni = n as i64;
        if let Some(t) = (1..v.len() - 1).find(|&t| v[t].abs() == ni) {
            return Err(Error::Domain(format!("vertex j({t}) = {} hits ±n", v[t])));
        }
        Ok(walk)
    }

    pub fn steps(&self) -> &[i64] {
        &self.steps
    }

    pub fn kind(&self) -> WalkKind {
        self.kind
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// ν, one less than the number of steps.
    pub fn nu(&self) -> usize {
        self.steps.len() - 1
    }

    /// j(0), …, j(ν+1).
    pub fn vertices(&self) -> Vec<i64> {
        let mut v = Vec::with_capacity(self.steps.len() + 1);
        let mut j = self.kind.start(self.n);
        v.push(j);
        for x in &self.steps {
            j += x;
            v.push(j);
        }
        v
    }

    /// Exact weight h(x, z).
    pub fn weight(&self, pot: &FourierPotential, z: &ExactScalar) -> Result<ExactScalar> {
        self.weight_in(pot, z, ())
    }

    /// Weight evaluated in an arbitrary scalar field.
    pub fn weight_in<F: Field>(&self, pot: &FourierPotential, z: &F, ctx: F::Ctx) -> Result<F> {
        let mut h = F::one(ctx);
        for x in &self.steps {
            match pot.coefficient_ref(*x) {
                Some(v) => h = h.mul_ref(&F::from_exact(v, ctx)),
                None => return Ok(F::zero(ctx)),
            }
        }
        let v = self.vertices();
        for (t, j) in v.iter().enumerate().take(v.len() - 1).skip(1) {
            let inv = resolvent(self.n, *j, z, ctx).ok_or(Error::Singular { n: self.n, t, vertex: *j })?;
            h = h.mul_ref(&inv);
        }
        Ok(h)
    }
}

/// (n² − j² + z)^{−1}, `None` when the factor vanishes.
fn resolvent<F: Field>(n: u64, j: i64, z: &F, ctx: F::Ctx) -> Option<F> {
    let ni = n as i64;
    let mut f = F::from_i64(ni * ni - j * j, ctx);
    f.add_assign_ref(z);
    f.recip_checked()
}

/// Position of a shell within its family, counted from the first nonempty one.
///
/// For X-kind with n = rsdm this is the index p (s·p negative steps,
/// r(p+m) positive); for n = sm−1 and r = 1 it is κ (1+sκ negative, m+κ
/// positive); for Y-kind with r = 1 it is q (n+sq negative, q positive).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ShellIndex(pub u64);

/// Numbers of −2R and +2S steps in a shell.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ShellCounts {
    pub neg: u64,
    pub pos: u64,
}

impl ShellCounts {
    pub fn steps(&self) -> u64 {
        self.neg + self.pos
    }
}

/// Step counts of the given shell, or `None` if no walk of this kind exists.
///
/// Solves −R·neg + S·pos = displacement/2 in nonnegative integers. Solutions
/// form the progression (neg₀ + s·k, pos₀ + r·k); the empty W-walk is skipped.
pub fn shell_counts(params: &TwoTermParams, n: u64, kind: WalkKind, shell: ShellIndex) -> Option<ShellCounts> {
    let half = kind.displacement(n) / 2;
    let d = params.d as i64;
    if half % d != 0 {
        return None;
    }
    let t = half / d;
    let (r, s) = (params.r as i64, params.s as i64);
    let first_pos = if t > 0 { (t + s - 1) / s } else { 0 };
    let pos0 = (first_pos..first_pos + r).find(|p| (s * p - t) % r == 0)?;
    let neg0 = (s * pos0 - t) / r;
    let k = shell.0 + u64::from(kind == WalkKind::W);
    Some(ShellCounts { neg: neg0 as u64 + params.s * k, pos: pos0 as u64 + params.r * k })
}

/// The binomial upper bound C(neg+pos, neg) on a shell's cardinality.
pub fn shell_size_bound(params: &TwoTermParams, n: u64, kind: WalkKind, shell: ShellIndex) -> ExactScalar {
    match shell_counts(params, n, kind, shell) {
        Some(c) => binomial(c.steps(), c.neg).expect("neg <= neg + pos"),
        None => ExactScalar::zero(),
    }
}

/// All admissible walks of a shell in lexicographic order of their steps.
pub fn enumerate_shell(params: &TwoTermParams, n: u64, kind: WalkKind, shell: ShellIndex) -> Vec<Walk> {
    let Some(c) = shell_counts(params, n, kind, shell) else {
        return Vec::new();
    };
    let down = -2 * params.R as i64;
    let up = 2 * params.S as i64;
    let ni = n as i64;
    let mut out = Vec::new();
    let mut steps = Vec::with_capacity(c.steps() as usize);

    #[allow(clippy::too_many_arguments)]
    fn dfs(
        j: i64,
        neg: u64,
        pos: u64,
        down: i64,
        up: i64,
        ni: i64,
        kind: WalkKind,
        steps: &mut Vec<i64>,
        out: &mut Vec<Walk>,
    ) {
        if neg == 0 && pos == 0 {
            out.push(Walk { steps: steps.clone(), kind, n: ni as u64 });
            return;
        }
        let last = neg + pos == 1;
        for (avail, x) in [(neg, down), (pos, up)] {
            if avail == 0 {
                continue;
            }
            let next = j + x;
            if !last && next.abs() == ni {
                continue;
            }
            steps.push(x);
            let (nn, pp) = if x == down { (neg - 1, pos) } else { (neg, pos - 1) };
            dfs(next, nn, pp, down, up, ni, kind, steps, out);
            steps.pop();
        }
    }

    dfs(kind.start(n), c.neg, c.pos, down, up, ni, kind, &mut steps, &mut out);
    out
}

/// Grid of admissible vertices for a shell: `ok[i][k]` is false where the
/// vertex after i negative and k positive steps hits ±n in the interior.
struct ShellGrid {
    counts: ShellCounts,
    start: i64,
    down: i64,
    up: i64,
    n: u64,
}

impl ShellGrid {
    fn new(params: &TwoTermParams, n: u64, kind: WalkKind, shell: ShellIndex) -> Option<Self> {
        let counts = shell_counts(params, n, kind, shell)?;
        Some(Self { counts, start: kind.start(n), down: -2 * params.R as i64, up: 2 * params.S as i64, n })
    }

    fn vertex(&self, i: u64, k: u64) -> i64 {
        self.start + self.down * i as i64 + self.up * k as i64
    }

    fn is_interior(&self, i: u64, k: u64) -> bool {
        !(i == 0 && k == 0) && !(i == self.counts.neg && k == self.counts.pos)
    }

    fn admissible(&self, i: u64, k: u64) -> bool {
        !self.is_interior(i, k) || self.vertex(i, k).abs() != self.n as i64
    }

    fn dims(&self) -> (usize, usize) {
        (self.counts.neg as usize + 1, self.counts.pos as usize + 1)
    }

    /// Reachable from the start through admissible vertices.
    fn forward(&self) -> Vec<Vec<bool>> {
        let (rows, cols) = self.dims();
        let mut f = vec![vec![false; cols]; rows];
        for i in 0..rows {
            for k in 0..cols {
                let (iu, ku) = (i as u64, k as u64);
                let from = (i == 0 && k == 0) || (i > 0 && f[i - 1][k]) || (k > 0 && f[i][k - 1]);
                f[i][k] = from && self.admissible(iu, ku);
            }
        }
        f
    }

    /// Can reach the end through admissible vertices.
    fn backward(&self) -> Vec<Vec<bool>> {
        let (rows, cols) = self.dims();
        let mut b = vec![vec![false; cols]; rows];
        for i in (0..rows).rev() {
            for k in (0..cols).rev() {
                let (iu, ku) = (i as u64, k as u64);
                let to = (i + 1 == rows && k + 1 == cols)
                    || (i + 1 < rows && b[i + 1][k])
                    || (k + 1 < cols && b[i][k + 1]);
                b[i][k] = to && self.admissible(iu, ku);
            }
        }
        b
    }
}

/// Exact number of admissible walks in a shell.
pub fn shell_count(params: &TwoTermParams, n: u64, kind: WalkKind, shell: ShellIndex) -> Integer {
    let Some(g) = ShellGrid::new(params, n, kind, shell) else {
        return Integer::new();
    };
    let (rows, cols) = g.dims();
    let mut c = vec![vec![Integer::new(); cols]; rows];
    for i in 0..rows {
        for k in 0..cols {
            if !g.admissible(i as u64, k as u64) {
                continue;
            }
            if i == 0 && k == 0 {
                c[0][0] = Integer::from(1);
                continue;
            }
            let mut acc = Integer::new();
            if i > 0 {
                acc += &c[i - 1][k];
            }
            if k > 0 {
                acc += &c[i][k - 1];
            }
            c[i][k] = acc;
        }
    }
    c[rows - 1][cols - 1].clone()
}

/// Σ_{x in shell} h(x, z) in the field `F`.
///
/// Errors with [`Error::Singular`] only if a vanishing factor sits on some
/// admissible walk of the shell.
pub fn shell_sum<F: Field>(
    params: &TwoTermParams,
    n: u64,
    kind: WalkKind,
    shell: ShellIndex,
    z: &F,
    ctx: F::Ctx,
) -> Result<F> {
    let Some(g) = ShellGrid::new(params, n, kind, shell) else {
        return Ok(F::zero(ctx));
    };
    let (rows, cols) = g.dims();
    let fwd = g.forward();
    if !fwd[rows - 1][cols - 1] {
        return Ok(F::zero(ctx));
    }
    let bwd = g.backward();
    let mut f: Vec<Vec<F>> = vec![vec![F::zero(ctx); cols]; rows];
    f[0][0] = F::one(ctx);
    for i in 0..rows {
        for k in 0..cols {
            if (i == 0 && k == 0) || !(fwd[i][k] && bwd[i][k]) {
                continue;
            }
            let mut acc = F::zero(ctx);
            if i > 0 {
                acc.add_assign_ref(&f[i - 1][k]);
            }
            if k > 0 {
                acc.add_assign_ref(&f[i][k - 1]);
            }
            let (iu, ku) = (i as u64, k as u64);
            if g.is_interior(iu, ku) {
                let j = g.vertex(iu, ku);
                let inv = resolvent(n, j, z, ctx).ok_or(Error::Singular {
                    n,
                    t: i + k,
                    vertex: j,
                })?;
                acc = acc.mul_ref(&inv);
            }
            f[i][k] = acc;
        }
    }
    let a = F::from_exact(&params.a.pow(g.counts.neg as u32), ctx);
    let b = F::from_exact(&params.b.pow(g.counts.pos as u32), ctx);
    Ok(f[rows - 1][cols - 1].mul_ref(&a).mul_ref(&b))
}

/// Sums of h(x, z) over admissible walks of the given kind for a general
/// potential, split by number of steps: entry t−1 holds the walks with t
/// steps, for t = 1..=step_cap.
pub fn sums_by_length<F: Field>(
    pot: &FourierPotential,
    n: u64,
    kind: WalkKind,
    z: &F,
    step_cap: usize,
    ctx: F::Ctx,
) -> Result<Vec<F>> {
    let mut totals = vec![F::zero(ctx); step_cap];
    if pot.is_empty() || step_cap == 0 || n == 0 {
        return Ok(totals);
    }
    let terms: Vec<(i64, F)> = pot.terms().map(|(m, v)| (m, F::from_exact(v, ctx))).collect();
    let support: Vec<i64> = terms.iter().map(|(m, _)| *m).collect();
    let reach = max_reach(&support);
    let ni = n as i64;
    let (start, end) = (kind.start(n), kind.end(n));
    let mut finish = FinishOracle::new(&support, ni, end);

    let mut layer: BTreeMap<i64, F> = BTreeMap::new();
    layer.insert(start, F::one(ctx));
    for t in 1..=step_cap {
        let mut next: BTreeMap<i64, F> = BTreeMap::new();
        for (j, val) in &layer {
            for (m, v) in &terms {
                let jn = j + m;
                if (jn - end).abs() > (step_cap - t) as i64 * reach && jn != end {
                    continue;
                }
                let contrib = val.mul_ref(v);
                next.entry(jn).and_modify(|acc| acc.add_assign_ref(&contrib)).or_insert(contrib);
            }
        }
        if let Some(v) = next.get(&end) {
            totals[t - 1] = v.clone();
        }
        let remaining = step_cap - t;
        let mut cont: BTreeMap<i64, F> = BTreeMap::new();
        for (j, val) in next {
            if j.abs() == ni || remaining == 0 {
                continue;
            }
            match resolvent(n, j, z, ctx) {
                Some(inv) => {
                    cont.insert(j, val.mul_ref(&inv));
                }
                None => {
                    if finish.can_finish(j, remaining) {
                        return Err(Error::Singular { n, t, vertex: j });
                    }
                }
            }
        }
        layer = cont;
    }
    Ok(totals)
}

fn max_reach(support: &[i64]) -> i64 {
    support.iter().map(|m| m.abs()).max().unwrap_or(0)
}

/// Memoized "an admissible continuation from j reaches the end in ≤ u steps".
struct FinishOracle<'a> {
    support: &'a [i64],
    n: i64,
    end: i64,
    memo: HashMap<(i64, usize), bool>,
}

impl<'a> FinishOracle<'a> {
    fn new(support: &'a [i64], n: i64, end: i64) -> Self {
        Self { support, n, end, memo: HashMap::new() }
    }

    fn can_finish(&mut self, j: i64, u: usize) -> bool {
        if u == 0 {
            return false;
        }
        if (j - self.end).abs() > u as i64 * max_reach(self.support) {
            return false;
        }
        if let Some(v) = self.memo.get(&(j, u)) {
            return *v;
        }
        let mut ok = false;
        for idx in 0..self.support.len() {
            let jn = j + self.support[idx];
            if jn == self.end || (jn.abs() != self.n && self.can_finish(jn, u - 1)) {
                ok = true;
                break;
            }
        }
        self.memo.insert((j, u), ok);
        ok
    }
}
