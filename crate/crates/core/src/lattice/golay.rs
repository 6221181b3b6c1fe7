//! Extended binary Golay code [24, 12, 8].
//!
//! Built as the cyclic quadratic-residue code of length 23 with generator polynomial
//! g(x) = x^11 + x^9 + x^7 + x^6 + x^5 + x + 1, extended by an overall parity bit.
//! Words are packed into the low 24 bits of a `u32`, bit `i` being coordinate `i`.

use super::LatticeError;

const GENERATOR_POLY: u32 = 0xAE3;

/// Weight distribution 1 + 759 x^8 + 2576 x^12 + 759 x^16 + x^24.
pub const WEIGHT_ENUMERATOR: [(u32, usize); 5] = [(0, 1), (8, 759), (12, 2576), (16, 759), (24, 1)];

#[derive(Debug, Clone)]
pub struct GolayCode {
    generator: [u32; 12],
    codewords: Vec<u32>,
}

impl GolayCode {
    pub fn generator(&self) -> &[u32; 12] {
        &self.generator
    }

    /// All 4096 codewords in increasing numeric order.
    pub fn codewords(&self) -> &[u32] {
        &self.codewords
    }

    /// Membership via self-duality: a word lies in the code iff it is orthogonal to every
    /// generator row.
    pub fn contains(&self, word: u32) -> bool {
        word >> 24 == 0 && self.generator.iter().all(|g| (word & g).count_ones().is_multiple_of(2))
    }

    pub fn weight_distribution(&self) -> [usize; 25] {
        let mut hist = [0usize; 25];
        for w in &self.codewords {
            hist[w.count_ones() as usize] += 1;
        }
        hist
    }

    pub fn octads(&self) -> impl Iterator<Item = u32> + '_ {
        self.codewords.iter().copied().filter(|w| w.count_ones() == 8)
    }
}

pub fn build_golay() -> Result<GolayCode, LatticeError> {
    let mut generator = [0u32; 12];
    for (i, row) in generator.iter_mut().enumerate() {
        let cyclic = GENERATOR_POLY << i;
        let parity = cyclic.count_ones() & 1;
        *row = cyclic | (parity << 23);
    }
    let mut codewords: Vec<u32> = (0u32..4096)
        .map(|msg| {
            generator
                .iter()
                .enumerate()
                .filter(|(i, _)| msg >> i & 1 == 1)
                .fold(0, |acc, (_, g)| acc ^ g)
        })
        .collect();
    codewords.sort_unstable();
    codewords.dedup();

    let code = GolayCode { generator, codewords };
    if code.codewords.len() != 4096 {
        return Err(LatticeError::BadCode(format!("{} distinct codewords", code.codewords.len())));
    }
    let hist = code.weight_distribution();
    for (w, n) in WEIGHT_ENUMERATOR {
        if hist[w as usize] != n {
            return Err(LatticeError::BadCode(format!("{} words of weight {w}, expected {n}", hist[w as usize])));
        }
    }
    for &a in &code.generator {
        for &b in &code.generator {
            if (a & b).count_ones() % 2 != 0 {
                return Err(LatticeError::BadCode("generator is not self-orthogonal".into()));
            }
        }
    }
    Ok(code)
}
