use std::fmt;
use std::str::FromStr;

use rand::Rng;
use smallvec::SmallVec;

use super::HypercubeError;

pub(crate) type Words = SmallVec<[u64; 2]>;

/// A point of `{0,1}^k`. Question 1 is the most significant bit of the
/// first word, so masks compare like the binary numbers they spell.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Profile {
    k: usize,
    words: Words,
}

fn word_count(k: usize) -> usize {
    k.div_ceil(64)
}

impl Profile {
    pub fn zeros(k: usize) -> Self {
        Profile {
            k,
            words: SmallVec::from_elem(0, word_count(k)),
        }
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut p = Profile::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                p.words[i / 64] |= 1u64 << (63 - i % 64);
            }
        }
        p
    }

    /// Uniform random profile.
    pub fn random<R: Rng>(k: usize, rng: &mut R) -> Self {
        let mut words: Words = (0..word_count(k)).map(|_| rng.random::<u64>()).collect();
        let spare = words.len() * 64 - k;
        if let Some(last) = words.last_mut() {
            if spare > 0 {
                *last &= !((1u64 << spare) - 1);
            }
        }
        Profile { k, words }
    }

    pub fn len(&self) -> usize {
        self.k
    }

    pub fn is_empty(&self) -> bool {
        self.k == 0
    }

    /// Answer to question `q`, counted from 1.
    pub fn bit(&self, q: usize) -> bool {
        assert!(
            (1..=self.k).contains(&q),
            "question {q} out of range 1..={}",
            self.k
        );
        let i = q - 1;
        self.words[i / 64] >> (63 - i % 64) & 1 == 1
    }

    pub(crate) fn words(&self) -> &[u64] {
        &self.words
    }

    pub(crate) fn xor(&self, other: &Profile) -> Result<Words, HypercubeError> {
        if self.k != other.k {
            return Err(HypercubeError::LengthMismatch(self.k, other.k));
        }
        Ok(self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| a ^ b)
            .collect())
    }
}

impl fmt::Debug for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Profile({self})")
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for q in 1..=self.k {
            f.write_str(if self.bit(q) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for Profile {
    type Err = HypercubeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(HypercubeError::BadProfile(s.to_string())),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Profile::from_bits(&bits))
    }
}
