//! Constructors for the functionals and games the toolkit studies.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{index::MixedRadix, BellFunctional, FunctionalKind, Scenario, NORMALIZATION_TOL};

/// Dense tables above this many entries are refused.
pub const MAX_TABLE_ENTRIES: usize = 1 << 26;

fn guard_table(len: u128, what: &str) -> Result<()> {
    if len > MAX_TABLE_ENTRIES as u128 {
        return Err(Error::Budget {
            bound: format!("dense {what} table"),
            required: len,
            budget: MAX_TABLE_ENTRIES as u64,
        });
    }
    Ok(())
}

/// Bipartite XOR game: win iff `a ⊕ b = x·y`, uniform questions.
pub fn chsh_game() -> BellFunctional {
    let s = Scenario::uniform(2, 2, 2).expect("static scenario");
    let mut coeffs = vec![0.0; 16];
    for x in 0..2 {
        for y in 0..2 {
            for a in 0..2 {
                for b in 0..2 {
                    if a ^ b == x & y {
                        coeffs[(x * 2 + y) * 4 + a * 2 + b] = 0.25;
                    }
                }
            }
        }
    }
    BellFunctional::game(s, coeffs)
        .expect("CHSH is normalized")
        .with_label("chsh")
}

/// Correlation form of CHSH, `M_xy = (-1)^{xy} / 4`.
///
/// The game value of a binary behaviour is `1/2 + 1/2 · ⟨M, γ⟩`.
pub fn chsh_correlation_functional() -> BellFunctional {
    let s = Scenario::uniform(2, 2, 2).expect("static scenario");
    BellFunctional::correlation(s, vec![0.25, 0.25, 0.25, -0.25])
        .expect("static functional")
        .with_label("chsh-cor")
}

/// The 1-input, 1-output game with coefficient 1 on `parties` players.
pub fn trivial_game(parties: usize) -> Result<BellFunctional> {
    let s = Scenario::uniform(parties, 1, 1)?;
    Ok(BellFunctional::game(s, vec![1.0])?.with_label("trivial"))
}

pub fn check_normalization(g: &BellFunctional) -> bool {
    !g.is_correlation() && g.is_nonnegative() && g.normalization_sum() <= 1.0 + NORMALIZATION_TOL
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KvParams {
    l: u32,
    eta: f64,
}

impl KvParams {
    /// `n = 2^l` with the default noise `η = 1/2 − 1/log₂ n`.
    pub fn new(l: u32) -> Result<Self> {
        if l == 0 {
            return Err(Error::domain("Khot-Vishnoi needs l >= 1"));
        }
        Self::with_eta(l, 0.5 - 1.0 / l as f64)
    }

    pub fn with_eta(l: u32, eta: f64) -> Result<Self> {
        if l == 0 || l > 5 {
            return Err(Error::domain(format!("l = {l} outside 1..=5")));
        }
        if !(0.0..=0.5).contains(&eta) {
            return Err(Error::domain(format!("noise {eta} outside [0, 1/2]")));
        }
        Ok(Self { l, eta })
    }

    /// From the group length `n`, which must be a power of two.
    pub fn from_n(n: usize) -> Result<Self> {
        if n < 2 || !n.is_power_of_two() {
            return Err(Error::domain(format!("n = {n} is not a power of two >= 2")));
        }
        Self::new(n.trailing_zeros())
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn n(&self) -> usize {
        1 << self.l
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn num_cosets(&self) -> usize {
        (1usize << self.n()) / self.n()
    }
}

/// Cosets of the Hadamard code inside `{0,1}^n`.
///
/// A word is stored as an integer whose most significant bit is coordinate
/// 0, so integer order is lexicographic order. Cosets are sorted by their
/// smallest member and each coset lists its members in increasing order.
#[derive(Clone, Debug)]
pub struct HadamardCosets {
    n: usize,
    cosets: Vec<Vec<u64>>,
}

impl HadamardCosets {
    pub fn new(l: u32) -> Result<Self> {
        let n = 1usize << l;
        if n > 16 {
            return Err(Error::Budget {
                bound: format!("2^{n} words of the Khot-Vishnoi group"),
                required: 1u128 << n,
                budget: 1 << 16,
            });
        }
        let code = Self::code(l);
        let mut seen = vec![false; 1 << n];
        let mut cosets = Vec::with_capacity((1 << n) / n);
        for u in 0..(1u64 << n) {
            if seen[u as usize] {
                continue;
            }
            let mut members: Vec<u64> = code.iter().map(|c| u ^ c).collect();
            members.sort_unstable();
            for &m in &members {
                seen[m as usize] = true;
            }
            cosets.push(members);
        }
        Ok(Self { n, cosets })
    }

    /// Codewords `c_s(i) = ⟨s, i⟩ mod 2` for `s ∈ {0,1}^l`.
    pub fn code(l: u32) -> Vec<u64> {
        let n = 1usize << l;
        (0..n)
            .map(|s| {
                (0..n).fold(0u64, |word, i| {
                    let bit = ((s & i).count_ones() & 1) as u64;
                    word | (bit << (n - 1 - i))
                })
            })
            .collect()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn cosets(&self) -> &[Vec<u64>] {
        &self.cosets
    }

    pub fn member(&self, coset: usize, index: usize) -> u64 {
        self.cosets[coset][index]
    }

    /// Coordinate `i` of a word, as 0 or 1.
    pub fn bit(&self, word: u64, i: usize) -> u64 {
        (word >> (self.n - 1 - i)) & 1
    }
}

/// The Khot-Vishnoi game on cosets of the Hadamard code.
///
/// Questions are cosets, answers index coset members. The coefficient of
/// `([u], [v], a, b)` is `η^{|z|}(1−η)^{n−|z|} / #cosets` with `z = a ⊕ b`.
pub fn khot_vishnoi(params: KvParams) -> Result<BellFunctional> {
    let n = params.n();
    let cosets = HadamardCosets::new(params.l())?;
    let num = cosets.cosets().len();
    guard_table((num * num * n * n) as u128, "Khot-Vishnoi")?;
    let s = Scenario::uniform(2, num, n)?;
    let eta = params.eta();
    // Noise weight of each Hamming weight; powi(0) is 1 even when eta is 0.
    let weight: Vec<f64> = (0..=n)
        .map(|w| eta.powi(w as i32) * (1.0 - eta).powi((n - w) as i32) / num as f64)
        .collect();
    let mut coeffs = vec![0.0; s.table_len()];
    for (q1, c1) in cosets.cosets().iter().enumerate() {
        for (q2, c2) in cosets.cosets().iter().enumerate() {
            let base = (q1 * num + q2) * n * n;
            for (a, u) in c1.iter().enumerate() {
                for (b, v) in c2.iter().enumerate() {
                    coeffs[base + a * n + b] = weight[(u ^ v).count_ones() as usize];
                }
            }
        }
    }
    Ok(BellFunctional::game(s, coeffs)?.with_label(format!("kv(l={},eta={})", params.l(), eta)))
}

/// ±1 matrix of order `2^m` with `H Hᵀ = 2^m I`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HadamardMatrix {
    order: usize,
    entries: Vec<i8>,
}

impl HadamardMatrix {
    /// Sylvester doubling, `H_{2m} = [[H, H], [H, −H]]`.
    pub fn sylvester(m: u32) -> Self {
        let order = 1usize << m;
        let entries = (0..order * order)
            .map(|idx| {
                let (x, y) = (idx / order, idx % order);
                if (x & y).count_ones() % 2 == 0 {
                    1
                } else {
                    -1
                }
            })
            .collect();
        Self { order, entries }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, x: usize, y: usize) -> i8 {
        self.entries[x * self.order + y]
    }

    /// Exact integer check of `H Hᵀ = order · I`.
    pub fn is_hadamard(&self) -> bool {
        let n = self.order;
        (0..n).all(|i| {
            (0..n).all(|j| {
                let dot: i64 = (0..n)
                    .map(|t| self.get(i, t) as i64 * self.get(j, t) as i64)
                    .sum();
                dot == if i == j { n as i64 } else { 0 }
            })
        })
    }
}

/// Tripartite correlation functional `M_{xy1} = h_{xy}` on the largest
/// Sylvester block of order `2^m ≤ N`, zero elsewhere.
pub fn hadamard_correlation_functional(inputs: usize) -> Result<BellFunctional> {
    if inputs < 2 {
        return Err(Error::domain("the Hadamard functional needs N >= 2"));
    }
    let m = usize::BITS - 1 - inputs.leading_zeros();
    let h = HadamardMatrix::sylvester(m);
    let s = Scenario::uniform(3, inputs, 2)?;
    let mut coeffs = vec![0.0; s.num_input_tuples()];
    for x in 0..h.order() {
        for y in 0..h.order() {
            coeffs[(x * inputs + y) * inputs] = h.get(x, y) as f64;
        }
    }
    Ok(BellFunctional::correlation(s, coeffs)?.with_label(format!("hadamard-cor(N={inputs})")))
}

fn bipartite_sizes(g: &BellFunctional, what: &str) -> Result<[usize; 4]> {
    g.scenario().expect_parties(2, what)?;
    if g.is_correlation() {
        return Err(Error::unsupported(format!(
            "{what} takes full functionals, not correlation functionals"
        )));
    }
    let s = g.scenario();
    Ok([s.inputs()[0], s.outputs()[0], s.inputs()[1], s.outputs()[1]])
}

fn combined_kind(parts: &[&BellFunctional]) -> FunctionalKind {
    if parts.iter().all(|g| g.kind() == FunctionalKind::Game) {
        FunctionalKind::Game
    } else {
        FunctionalKind::General
    }
}

/// Accessor for `G_{xy}^{ab}` of a bipartite functional.
struct Bip<'a> {
    coeffs: &'a [f64],
    ny: usize,
    ka: usize,
    kb: usize,
}

impl<'a> Bip<'a> {
    fn new(g: &'a BellFunctional) -> Self {
        let s = g.scenario();
        Self {
            coeffs: g.coeffs(),
            ny: s.inputs()[1],
            ka: s.outputs()[0],
            kb: s.outputs()[1],
        }
    }

    #[inline]
    fn get(&self, x: usize, y: usize, a: usize, b: usize) -> f64 {
        self.coeffs[(x * self.ny + y) * self.ka * self.kb + a * self.kb + b]
    }
}

/// Parallel play of two bipartite functionals: inputs and outputs become pairs.
pub fn tensor_product(g: &BellFunctional, h: &BellFunctional) -> Result<BellFunctional> {
    let [gxa, gka, gxb, gkb] = bipartite_sizes(g, "tensor product")?;
    let [hxa, hka, hxb, hkb] = bipartite_sizes(h, "tensor product")?;
    let s = Scenario::new(vec![gxa * hxa, gxb * hxb], vec![gka * hka, gkb * hkb])?;
    guard_table(s.table_len() as u128, "tensor product")?;
    let (gg, hh) = (Bip::new(g), Bip::new(h));
    // Digits: x1 x2 y1 y2 a1 a2 b1 b2.
    let radix = MixedRadix::new(&[gxa, hxa, gxb, hxb, gka, hka, gkb, hkb]);
    let mut d = vec![0; 8];
    let mut coeffs = Vec::with_capacity(radix.len());
    for _ in 0..radix.len() {
        coeffs.push(gg.get(d[0], d[2], d[4], d[6]) * hh.get(d[1], d[3], d[5], d[7]));
        radix.advance(&mut d);
    }
    let f = BellFunctional::new(s, combined_kind(&[g, h]), coeffs)?;
    Ok(f.with_label(format!("({})x({})", g.label(), h.label())))
}

/// Three pairwise copies of `g`: Alice-Bob, Alice-Charlie, Bob-Charlie.
///
/// Alice holds `(x1, x2)`, Bob `(y1, y2)`, Charlie `(z1, z2)`, and the
/// coefficient is `G_{x1 y1}^{a1 b1} G_{x2 z1}^{a2 c1} G_{y2 z2}^{b2 c2}`.
pub fn hat_construction(g: &BellFunctional) -> Result<BellFunctional> {
    let [na, ka, nb, kb] = bipartite_sizes(g, "hat construction")?;
    let s = Scenario::new(vec![na * na, nb * na, nb * nb], vec![ka * ka, kb * ka, kb * kb])?;
    guard_table(s.table_len() as u128, "hat construction")?;
    let gg = Bip::new(g);
    // Digits: x1 x2 y1 y2 z1 z2 a1 a2 b1 b2 c1 c2.
    let radix = MixedRadix::new(&[na, na, nb, na, nb, nb, ka, ka, kb, ka, kb, kb]);
    let mut d = vec![0; 12];
    let mut coeffs = Vec::with_capacity(radix.len());
    for _ in 0..radix.len() {
        let (x1, x2, y1, y2, z1, z2) = (d[0], d[1], d[2], d[3], d[4], d[5]);
        let (a1, a2, b1, b2, c1, c2) = (d[6], d[7], d[8], d[9], d[10], d[11]);
        coeffs.push(gg.get(x1, y1, a1, b1) * gg.get(x2, z1, a2, c1) * gg.get(y2, z2, b2, c2));
        radix.advance(&mut d);
    }
    let f = BellFunctional::new(s, combined_kind(&[g]), coeffs)?;
    Ok(f.with_label(format!("hat({})", g.label())))
}

/// Two copies of `g`: Alice-Bob and Bob-Charlie, Bob holding `(y1, y2)`.
pub fn tilde_construction(g: &BellFunctional) -> Result<BellFunctional> {
    let [na, ka, nb, kb] = bipartite_sizes(g, "tilde construction")?;
    let s = Scenario::new(vec![na, nb * na, nb], vec![ka, kb * ka, kb])?;
    guard_table(s.table_len() as u128, "tilde construction")?;
    let gg = Bip::new(g);
    // Digits: x y1 y2 z a b1 b2 c.
    let radix = MixedRadix::new(&[na, nb, na, nb, ka, kb, ka, kb]);
    let mut d = vec![0; 8];
    let mut coeffs = Vec::with_capacity(radix.len());
    for _ in 0..radix.len() {
        coeffs.push(gg.get(d[0], d[1], d[4], d[5]) * gg.get(d[2], d[3], d[6], d[7]));
        radix.advance(&mut d);
    }
    let f = BellFunctional::new(s, combined_kind(&[g]), coeffs)?;
    Ok(f.with_label(format!("tilde({})", g.label())))
}

/// How a functional was built; stored in game files so that constructed
/// quantum strategies can be recovered later.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum Recipe {
    Chsh,
    ChshCor,
    Trivial { parties: usize },
    Kv { l: u32, eta: f64 },
    HadamardCor { n: usize },
    Tensor { left: Box<Recipe>, right: Box<Recipe> },
    Hat { base: Box<Recipe> },
    Tilde { base: Box<Recipe> },
}

impl Recipe {
    pub fn build(&self) -> Result<BellFunctional> {
        match self {
            Recipe::Chsh => Ok(chsh_game()),
            Recipe::ChshCor => Ok(chsh_correlation_functional()),
            Recipe::Trivial { parties } => trivial_game(*parties),
            Recipe::Kv { l, eta } => khot_vishnoi(KvParams::with_eta(*l, *eta)?),
            Recipe::HadamardCor { n } => hadamard_correlation_functional(*n),
            Recipe::Tensor { left, right } => tensor_product(&left.build()?, &right.build()?),
            Recipe::Hat { base } => hat_construction(&base.build()?),
            Recipe::Tilde { base } => tilde_construction(&base.build()?),
        }
    }
}
