//! Sequences indexed by the free group, just far enough to show that the
//! bilateral shifts lose their orthogonal ranges there.

use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FreeLetter {
    Gen(usize),
    Inv(usize),
}

impl FreeLetter {
    pub fn inverse(self) -> FreeLetter {
        match self {
            FreeLetter::Gen(i) => FreeLetter::Inv(i),
            FreeLetter::Inv(i) => FreeLetter::Gen(i),
        }
    }
}

/// A reduced word: no letter is adjacent to its inverse.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ReducedWord(Vec<FreeLetter>);

impl ReducedWord {
    pub fn identity() -> Self {
        ReducedWord(Vec::new())
    }

    pub fn from_letters(letters: &[FreeLetter]) -> Self {
        letters
            .iter()
            .fold(Self::identity(), |w, &l| w.times(l))
    }

    pub fn letters(&self) -> &[FreeLetter] {
        &self.0
    }

    /// Right multiplication by one letter, cancelling against the last letter.
    pub fn times(&self, letter: FreeLetter) -> ReducedWord {
        let mut v = self.0.clone();
        if v.last() == Some(&letter.inverse()) {
            v.pop();
        } else {
            v.push(letter);
        }
        ReducedWord(v)
    }
}

impl fmt::Display for ReducedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "ε");
        }
        for l in &self.0 {
            match *l {
                FreeLetter::Gen(i) => write!(f, "g{}", i + 1)?,
                FreeLetter::Inv(i) => write!(f, "g{}⁻¹", i + 1)?,
            }
        }
        Ok(())
    }
}

/// Finitely supported vector over reduced words.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FreeGroupVector(BTreeMap<ReducedWord, f64>);

impl FreeGroupVector {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(word: ReducedWord) -> Self {
        FreeGroupVector(BTreeMap::from([(word, 1.0)]))
    }

    pub fn coeff(&self, word: &ReducedWord) -> f64 {
        self.0.get(word).copied().unwrap_or(0.0)
    }

    pub fn add(&self, other: &FreeGroupVector) -> FreeGroupVector {
        let mut out = self.0.clone();
        for (w, c) in &other.0 {
            *out.entry(w.clone()).or_insert(0.0) += c;
        }
        out.retain(|_, c| *c != 0.0);
        FreeGroupVector(out)
    }

    /// Bilateral shift `e_α ↦ e_{α g_i}`; a trailing `g_i⁻¹` cancels.
    pub fn right_shift(&self, i: usize) -> FreeGroupVector {
        let mut out = FreeGroupVector::zero();
        for (w, &c) in &self.0 {
            let mut term = FreeGroupVector::zero();
            term.0.insert(w.times(FreeLetter::Gen(i)), c);
            out = out.add(&term);
        }
        out
    }

    pub fn norm_squared(&self) -> f64 {
        self.0.values().map(|c| c * c).sum()
    }
}

/// One evaluation of `‖Σ R̄_i h_i‖²` against `Σ ‖h_i‖²`.
#[derive(Debug, Clone, PartialEq)]
pub struct InequalityCase {
    pub label: String,
    pub lhs: f64,
    pub rhs: f64,
}

impl InequalityCase {
    fn evaluate(label: &str, hs: &[FreeGroupVector]) -> Self {
        let image = hs
            .iter()
            .enumerate()
            .fold(FreeGroupVector::zero(), |acc, (i, h)| acc.add(&h.right_shift(i)));
        InequalityCase {
            label: label.to_string(),
            lhs: image.norm_squared(),
            rhs: hs.iter().map(FreeGroupVector::norm_squared).sum(),
        }
    }

    pub fn violated(&self) -> bool {
        self.lhs > self.rhs
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FreeGroupReport {
    /// `h_i = e_{g_i⁻¹}`: both images collapse onto `e_ε`.
    pub counterexample: InequalityCase,
    /// `h_i = e_ε` with no inverses in play: images `e_{g_1}`, `e_{g_2}` stay orthogonal.
    pub monoid_contrast: InequalityCase,
    /// `h_1 = 0`, `h_2 = e_{g_2⁻¹}`.
    pub degenerate: InequalityCase,
}

impl FreeGroupReport {
    /// True when the counterexample breaks the inequality and the controls do not.
    pub fn exhibits_violation(&self) -> bool {
        self.counterexample.violated()
            && !self.monoid_contrast.violated()
            && !self.degenerate.violated()
    }
}

/// Two generators, vectors supported on words of length at most one.
pub fn free_group_counterexample() -> FreeGroupReport {
    let inv = |i| FreeGroupVector::basis(ReducedWord::from_letters(&[FreeLetter::Inv(i)]));
    let eps = || FreeGroupVector::basis(ReducedWord::identity());
    FreeGroupReport {
        counterexample: InequalityCase::evaluate("h_i = e_{g_i^-1}", &[inv(0), inv(1)]),
        monoid_contrast: InequalityCase::evaluate("h_i = e_ε (monoid)", &[eps(), eps()]),
        degenerate: InequalityCase::evaluate("h_1 = 0", &[FreeGroupVector::zero(), inv(1)]),
    }
}
