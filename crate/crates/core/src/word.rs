//! Letters, words and substitutions over the alphabet `{1, 2}`.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::matrix::{Mat2, Vec2};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[repr(u8)]
pub enum Letter {
    One = 1,
    Two = 2,
}

impl Letter {
    pub const ALL: [Letter; 2] = [Letter::One, Letter::Two];

    /// Zero-based index, used for matrix columns and count arrays.
    #[inline]
    pub fn index(self) -> usize {
        self as usize - 1
    }

    pub fn from_index(i: usize) -> Letter {
        match i {
            0 => Letter::One,
            1 => Letter::Two,
            _ => panic!("letter index {i} out of range"),
        }
    }

    pub fn value(self) -> u8 {
        self as u8
    }

    pub fn other(self) -> Letter {
        match self {
            Letter::One => Letter::Two,
            Letter::Two => Letter::One,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Letter::One => '1',
            Letter::Two => '2',
        }
    }
}

impl TryFrom<char> for Letter {
    type Error = Error;

    fn try_from(c: char) -> Result<Letter> {
        match c {
            '1' => Ok(Letter::One),
            '2' => Ok(Letter::Two),
            other => Err(Error::InvalidLetter(other)),
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

impl Serialize for Letter {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_u8(self.value())
    }
}

/// A finite word, possibly empty.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }

    pub fn first(&self) -> Option<Letter> {
        self.0.first().copied()
    }

    pub fn push(&mut self, a: Letter) {
        self.0.push(a);
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn prefix(&self, len: usize) -> Word {
        Word(self.0[..len.min(self.0.len())].to_vec())
    }

    /// Letter counts `(|w|_1, |w|_2)`.
    pub fn counts(&self) -> [u64; 2] {
        counts(&self.0)
    }

    pub fn abelianize(&self) -> Vec2 {
        abelianize(self)
    }
}

/// Letter counts of a slice.
pub fn counts(letters: &[Letter]) -> [u64; 2] {
    let ones = letters.iter().filter(|&&a| a == Letter::One).count() as u64;
    [ones, letters.len() as u64 - ones]
}

/// The abelianization `l(w) = (|w|_1, |w|_2)`.
pub fn abelianize(w: &Word) -> Vec2 {
    let [a, b] = w.counts();
    Vec2::new(a.into(), b.into())
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Word> {
        s.chars()
            .filter(|c| !c.is_whitespace())
            .map(Letter::try_from)
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for a in &self.0 {
            write!(f, "{}", a.as_char())?;
        }
        Ok(())
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl std::borrow::Borrow<[Letter]> for Word {
    fn borrow(&self) -> &[Letter] {
        &self.0
    }
}

impl From<Vec<Letter>> for Word {
    fn from(v: Vec<Letter>) -> Self {
        Word(v)
    }
}

/// A substitution on `{1, 2}` given by the images of both letters.
///
/// Both images are non-empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Substitution {
    images: [Word; 2],
}

impl Substitution {
    pub fn new(image1: Word, image2: Word) -> Result<Self> {
        if image1.is_empty() {
            return Err(Error::EmptyImage(1));
        }
        if image2.is_empty() {
            return Err(Error::EmptyImage(2));
        }
        Ok(Substitution {
            images: [image1, image2],
        })
    }

    /// Convenience constructor from two strings of `'1'`/`'2'` characters.
    pub fn from_images(image1: &str, image2: &str) -> Result<Self> {
        Substitution::new(image1.parse()?, image2.parse()?)
    }

    pub fn identity() -> Self {
        Substitution {
            images: [Word(vec![Letter::One]), Word(vec![Letter::Two])],
        }
    }

    pub fn fibonacci() -> Self {
        Substitution::from_images("12", "1").expect("valid images")
    }

    pub fn image(&self, a: Letter) -> &Word {
        &self.images[a.index()]
    }

    pub fn apply(&self, w: &Word) -> Word {
        let mut out = Vec::new();
        for &a in w.letters() {
            out.extend_from_slice(self.images[a.index()].letters());
        }
        Word(out)
    }

    /// The incidence matrix, whose column `j` is `l(σ(j))`.
    pub fn incidence(&self) -> Mat2 {
        let [a, c] = self.images[0].counts();
        let [b, d] = self.images[1].counts();
        Mat2::new([[a.into(), b.into()], [c.into(), d.into()]])
    }

    /// `(self ∘ other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Substitution) -> Substitution {
        Substitution {
            images: [self.apply(&other.images[0]), self.apply(&other.images[1])],
        }
    }

    pub fn is_unimodular(&self) -> bool {
        let det = self.incidence().det();
        det == 1.into() || det == (-1).into()
    }

    /// Number of letters in the image of `w`, without building it.
    pub fn image_len(&self, w: &Word) -> usize {
        let [a, b] = w.counts();
        a as usize * self.images[0].len() + b as usize * self.images[1].len()
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "1->{}, 2->{}", self.images[0], self.images[1])
    }
}

impl FromStr for Substitution {
    type Err = Error;

    /// Parses `1->12, 2->1` (whitespace-insensitive, either order).
    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let malformed = || Error::MalformedSubstitution(s.trim().to_string());
        let mut images: [Option<Word>; 2] = [None, None];
        for rule in compact.split(',') {
            let (lhs, rhs) = rule.split_once("->").ok_or_else(malformed)?;
            let mut lhs_chars = lhs.chars();
            let letter = match (lhs_chars.next(), lhs_chars.next()) {
                (Some(c), None) => Letter::try_from(c)?,
                _ => return Err(malformed()),
            };
            let slot = &mut images[letter.index()];
            if slot.is_some() {
                return Err(malformed());
            }
            *slot = Some(rhs.parse()?);
        }
        match images {
            [Some(a), Some(b)] => Substitution::new(a, b),
            _ => Err(malformed()),
        }
    }
}

impl Serialize for Substitution {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// A substitution paired with a name, as read from the `name: 1->12, 2->1` text format.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedSubstitution {
    pub name: String,
    pub substitution: Substitution,
}

impl FromStr for NamedSubstitution {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, rules) = s
            .split_once(':')
            .ok_or_else(|| Error::MalformedSubstitution(s.trim().to_string()))?;
        let name = name.trim();
        if name.is_empty() || !name.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '-') {
            return Err(Error::MalformedSubstitution(s.trim().to_string()));
        }
        Ok(NamedSubstitution {
            name: name.to_string(),
            substitution: rules.parse()?,
        })
    }
}

impl fmt::Display for NamedSubstitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.name, self.substitution)
    }
}

/// Lazy letter stream of `σ_0 σ_1 ⋯ σ_{n-1}(a)`.
///
/// The composite image grows exponentially in `n`; this walks it depth-first
/// so a prefix of length `L` costs `O(L · n)` without materializing the rest.
pub struct ImageIter<'a> {
    subs: &'a [Substitution],
    // (j, word, position) frames: `word` is an image under subs[j], and its
    // letters are expanded further through subs[j-1], down to subs[0].
    stack: Vec<(usize, &'a [Letter], usize)>,
    pending: Option<Letter>,
}

impl<'a> ImageIter<'a> {
    pub fn new(subs: &'a [Substitution], a: Letter) -> Self {
        if subs.is_empty() {
            return ImageIter {
                subs,
                stack: Vec::new(),
                pending: Some(a),
            };
        }
        let last = subs.len() - 1;
        ImageIter {
            subs,
            stack: vec![(last, subs[last].image(a).letters(), 0)],
            pending: None,
        }
    }
}

impl Iterator for ImageIter<'_> {
    type Item = Letter;

    fn next(&mut self) -> Option<Letter> {
        if let Some(a) = self.pending.take() {
            return Some(a);
        }
        loop {
            let (j, word, pos) = self.stack.last_mut()?;
            if *pos == word.len() {
                self.stack.pop();
                continue;
            }
            let a = word[*pos];
            *pos += 1;
            let j = *j;
            if j == 0 {
                return Some(a);
            }
            let next = self.subs[j - 1].image(a).letters();
            self.stack.push((j - 1, next, 0));
        }
    }
}

/// Full image `σ_0 ⋯ σ_{n-1}(a)` as a word.
pub fn composite_image(subs: &[Substitution], a: Letter) -> Word {
    Word(ImageIter::new(subs, a).collect())
}

/// Length of `σ_0 ⋯ σ_{n-1}(a)`, saturating at `u64::MAX`.
pub fn composite_image_len(subs: &[Substitution], a: Letter) -> u64 {
    // lengths[b] = |σ_0 ⋯ σ_{k-1}(b)|; extending by σ_k substitutes σ_k(b).
    let mut lengths = [1u64, 1u64];
    for s in subs {
        let mut next = [0u64; 2];
        for b in Letter::ALL {
            let [x, y] = s.image(b).counts();
            next[b.index()] = x
                .saturating_mul(lengths[0])
                .saturating_add(y.saturating_mul(lengths[1]));
        }
        lengths = next;
    }
    lengths[a.index()]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn abelianize_counts_letters() {
        assert_eq!(w("12").counts(), [1, 1]);
        assert_eq!(w("").counts(), [0, 0]);
        assert_eq!(w("11211").counts(), [4, 1]);
    }

    #[test]
    fn apply_concatenates_images() {
        let fib = Substitution::fibonacci();
        assert_eq!(fib.apply(&w("12")), w("121"));
        assert_eq!(fib.apply(&w("")), w(""));
        let s = Substitution::from_images("112", "12").unwrap();
        assert_eq!(s.apply(&w("21")), w("12112"));
    }

    #[test]
    fn incidence_examples() {
        let fib = Substitution::fibonacci();
        assert_eq!(fib.incidence(), Mat2::from_i64([[1, 1], [1, 0]]));
        let tm = Substitution::from_images("12", "21").unwrap();
        assert_eq!(tm.incidence(), Mat2::from_i64([[1, 1], [1, 1]]));
        let s = Substitution::from_images("112", "12").unwrap();
        assert_eq!(s.incidence(), Mat2::from_i64([[2, 1], [1, 1]]));
    }

    #[test]
    fn compose_examples() {
        let fib = Substitution::fibonacci();
        let sq = fib.compose(&fib);
        assert_eq!(sq, Substitution::from_images("121", "12").unwrap());
        assert_eq!(fib.compose(&Substitution::identity()), fib);
        assert_eq!(sq.incidence(), Mat2::from_i64([[2, 1], [1, 1]]));
    }

    #[test]
    fn unimodularity() {
        assert!(Substitution::fibonacci().is_unimodular());
        assert!(!Substitution::from_images("12", "21").unwrap().is_unimodular());
        assert!(Substitution::from_images("112", "12").unwrap().is_unimodular());
    }

    #[test]
    fn rejects_empty_images() {
        assert_eq!(Substitution::from_images("", "1"), Err(Error::EmptyImage(1)));
        assert_eq!(Substitution::from_images("1", ""), Err(Error::EmptyImage(2)));
        assert!("1->, 2->1".parse::<Substitution>().is_err());
    }

    #[test]
    fn parses_text_format() {
        let s: NamedSubstitution = "fib: 1->12, 2->1".parse().unwrap();
        assert_eq!(s.name, "fib");
        assert_eq!(s.substitution, Substitution::fibonacci());
        let t: Substitution = " 2 -> 1 ,1->1 2".parse().unwrap();
        assert_eq!(t, Substitution::fibonacci());
        assert_eq!(t.to_string().parse::<Substitution>().unwrap(), t);
        assert!("1->12".parse::<Substitution>().is_err());
        assert!("1->12, 1->2".parse::<Substitution>().is_err());
        assert!("1->13, 2->1".parse::<Substitution>().is_err());
    }

    #[test]
    fn lazy_image_matches_materialized() {
        let fib = Substitution::fibonacci();
        let tm = Substitution::from_images("12", "21").unwrap();
        let subs = vec![fib.clone(), tm.clone(), fib.clone(), fib.clone(), tm.clone()];
        for a in Letter::ALL {
            let mut expected = Word::new(vec![a]);
            for s in subs.iter().rev() {
                expected = s.apply(&expected);
            }
            assert_eq!(composite_image(&subs, a), expected);
            assert_eq!(composite_image_len(&subs, a), expected.len() as u64);
        }
        assert_eq!(composite_image(&[], Letter::Two), w("2"));
    }

    #[test]
    fn lazy_prefix_of_deep_image() {
        let subs = vec![Substitution::fibonacci(); 80];
        let prefix: Word = ImageIter::new(&subs, Letter::One).take(8).collect::<Vec<_>>().into();
        assert_eq!(prefix, w("12112121"));
    }
}
