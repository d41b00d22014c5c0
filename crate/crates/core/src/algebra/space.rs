use super::AlgebraError;

/// A single generator. Frame and theta indices are zero-based, so
/// `Frame(0)` is `e¹`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Generator {
    Frame(usize),
    Theta(usize),
    Da,
    DaBar,
}

/// Layout of the generators inside a 64-bit monomial key.
///
/// Bits run frame covectors first, then the `ϑ`'s, then `da`, then `dā`.
/// Sorted bit order is the canonical term order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GeneratorSpace {
    n_frame: u8,
    n_theta: u8,
    da_dabar: bool,
    q_cap: u8,
}

impl GeneratorSpace {
    pub fn new(n_frame: usize, n_theta: usize, has_da_dabar: bool, q_cap: usize) -> Result<Self, AlgebraError> {
        if !n_frame.is_multiple_of(2) {
            return Err(AlgebraError::OddFrame(n_frame));
        }
        let total = n_frame + n_theta + if has_da_dabar { 2 } else { 0 };
        if total > 63 {
            return Err(AlgebraError::TooManyGenerators(total));
        }
        Ok(GeneratorSpace {
            n_frame: n_frame as u8,
            n_theta: n_theta as u8,
            da_dabar: has_da_dabar,
            q_cap: q_cap.min(63) as u8,
        })
    }

    /// Frame covectors only.
    pub fn frame(n_frame: usize) -> Result<Self, AlgebraError> {
        Self::new(n_frame, 0, false, 0)
    }

    /// Frame plus `da`, `dā` with the default cap of 2.
    pub fn with_da_dabar(n_frame: usize) -> Result<Self, AlgebraError> {
        Self::new(n_frame, 0, true, 2)
    }

    pub fn n_frame(&self) -> usize {
        self.n_frame as usize
    }

    /// Complex dimension `n` of the model, half the frame size.
    pub fn complex_dim(&self) -> usize {
        self.n_frame as usize / 2
    }

    pub fn n_theta(&self) -> usize {
        self.n_theta as usize
    }

    pub fn has_da_dabar(&self) -> bool {
        self.da_dabar
    }

    pub fn q_cap(&self) -> usize {
        self.q_cap as usize
    }

    pub fn n_generators(&self) -> usize {
        self.n_frame() + self.n_theta() + if self.da_dabar { 2 } else { 0 }
    }

    pub fn frame_mask(&self) -> u64 {
        (1u64 << self.n_frame) - 1
    }

    pub fn aux_mask(&self) -> u64 {
        let all = (1u64 << self.n_generators()) - 1;
        all & !self.frame_mask()
    }

    pub fn top_frame(&self) -> u64 {
        self.frame_mask()
    }

    pub fn bit(&self, g: Generator) -> Result<u32, AlgebraError> {
        match g {
            Generator::Frame(i) if i < self.n_frame() => Ok(i as u32),
            Generator::Frame(i) => Err(AlgebraError::FrameIndex { index: i, n_frame: self.n_frame() }),
            Generator::Theta(j) if j < self.n_theta() => Ok((self.n_frame() + j) as u32),
            Generator::Da if self.da_dabar => Ok((self.n_frame() + self.n_theta()) as u32),
            Generator::DaBar if self.da_dabar => Ok((self.n_frame() + self.n_theta() + 1) as u32),
            other => Err(AlgebraError::MissingGenerator(other)),
        }
    }

    pub fn generator_at(&self, bit: u32) -> Generator {
        let b = bit as usize;
        if b < self.n_frame() {
            Generator::Frame(b)
        } else if b < self.n_frame() + self.n_theta() {
            Generator::Theta(b - self.n_frame())
        } else if b == self.n_frame() + self.n_theta() {
            Generator::Da
        } else {
            Generator::DaBar
        }
    }

    pub fn frame_degree(&self, mask: u64) -> u32 {
        (mask & self.frame_mask()).count_ones()
    }

    pub fn aux_degree(&self, mask: u64) -> u32 {
        (mask & self.aux_mask()).count_ones()
    }

    pub fn da_dabar_mask(&self) -> Option<u64> {
        if self.da_dabar {
            let da = self.n_frame() + self.n_theta();
            Some((1u64 << da) | (1u64 << (da + 1)))
        } else {
            None
        }
    }
}
