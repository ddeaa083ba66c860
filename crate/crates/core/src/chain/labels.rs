use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Label {
    I,
    N,
}

/// Packed per-vertex I/N labels, one bit per vertex (set bit = `N`).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LabelConfig {
    words: Vec<u64>,
    len: usize,
}

impl LabelConfig {
    pub fn all_identity(num_vertices: usize) -> Self {
        LabelConfig {
            words: vec![0; num_vertices.div_ceil(64)],
            len: num_vertices,
        }
    }

    /// `N` on `vertex`, `I` everywhere else.
    pub fn single(num_vertices: usize, vertex: usize) -> Self {
        let mut c = Self::all_identity(num_vertices);
        c.set(vertex, true);
        c
    }

    /// Builds from the low `num_vertices` bits of `mask` (bit `v` = vertex `v`).
    pub fn from_mask(num_vertices: usize, mask: u64) -> Self {
        assert!(num_vertices <= 64);
        let mut c = Self::all_identity(num_vertices);
        if num_vertices > 0 {
            let keep = if num_vertices == 64 {
                u64::MAX
            } else {
                (1u64 << num_vertices) - 1
            };
            c.words[0] = mask & keep;
        }
        c
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn is_n(&self, v: usize) -> bool {
        debug_assert!(v < self.len);
        (self.words[v >> 6] >> (v & 63)) & 1 == 1
    }

    pub fn get(&self, v: usize) -> Label {
        if self.is_n(v) {
            Label::N
        } else {
            Label::I
        }
    }

    #[inline]
    pub fn set(&mut self, v: usize, non_identity: bool) {
        debug_assert!(v < self.len);
        let bit = 1u64 << (v & 63);
        if non_identity {
            self.words[v >> 6] |= bit;
        } else {
            self.words[v >> 6] &= !bit;
        }
    }

    pub fn clear(&mut self) {
        self.words.iter_mut().for_each(|w| *w = 0);
    }

    pub fn count_n(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn non_identity(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let bit = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(i * 64 + bit)
            })
        })
    }

    /// Low 64 labels as a bitmask; used by the exact small-state chain.
    pub fn mask(&self) -> u64 {
        self.words.first().copied().unwrap_or(0)
    }
}

impl fmt::Debug for LabelConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LabelConfig({self})")
    }
}

impl fmt::Display for LabelConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in 0..self.len {
            f.write_str(if self.is_n(v) { "N" } else { "I" })?;
        }
        Ok(())
    }
}
