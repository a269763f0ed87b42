/// Row-major mixed-radix index with digit 0 varying slowest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MixedRadix {
    radices: Vec<usize>,
    strides: Vec<usize>,
    len: usize,
}

impl MixedRadix {
    pub fn new(radices: &[usize]) -> Self {
        let mut strides = vec![1; radices.len()];
        for i in (0..radices.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * radices[i + 1];
        }
        let len = radices.iter().product();
        Self {
            radices: radices.to_vec(),
            strides,
            len,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn digits(&self) -> usize {
        self.radices.len()
    }

    pub fn radices(&self) -> &[usize] {
        &self.radices
    }

    pub fn stride(&self, digit: usize) -> usize {
        self.strides[digit]
    }

    pub fn encode(&self, digits: &[usize]) -> usize {
        debug_assert_eq!(digits.len(), self.radices.len());
        digits
            .iter()
            .zip(&self.strides)
            .map(|(d, s)| d * s)
            .sum()
    }

    pub fn decode_into(&self, mut index: usize, out: &mut [usize]) {
        for (slot, stride) in out.iter_mut().zip(&self.strides) {
            *slot = index / stride;
            index %= stride;
        }
    }

    pub fn decode(&self, index: usize) -> Vec<usize> {
        let mut out = vec![0; self.radices.len()];
        self.decode_into(index, &mut out);
        out
    }

    /// Advance `digits` to the next tuple in row-major order. Returns false after the last one.
    pub fn advance(&self, digits: &mut [usize]) -> bool {
        for i in (0..digits.len()).rev() {
            digits[i] += 1;
            if digits[i] < self.radices[i] {
                return true;
            }
            digits[i] = 0;
        }
        false
    }
}

/// Saturating product used for enumeration-size estimates.
pub(crate) fn checked_pow(base: usize, exp: usize) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.saturating_mul(base as u128);
    }
    acc
}
