use super::{bracket, FieldSystem, VectorField};

#[derive(Clone, Debug, PartialEq)]
pub struct BasisEntry {
    pub field: VectorField,
    pub degree: usize,
    /// Field indices `(j1, …, jd)` of the right-nested bracket
    /// `[X_j1, [X_j2, … X_jd]]`.
    pub word: Vec<usize>,
    /// The bracket vanishes identically.
    pub zero: bool,
    /// Index of an earlier entry of the same degree equal to this one up to sign.
    pub duplicate_of: Option<usize>,
}

impl BasisEntry {
    /// Entries that take part in determinant sums.
    pub fn is_active(&self) -> bool {
        !self.zero && self.duplicate_of.is_none()
    }
}

/// All right-nested brackets of the fields up to a given length.
#[derive(Clone, Debug)]
pub struct CommutatorBasis {
    dim: usize,
    max_degree: usize,
    entries: Vec<BasisEntry>,
}

impl CommutatorBasis {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn entries(&self) -> &[BasisEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn active(&self) -> impl Iterator<Item = (usize, &BasisEntry)> {
        self.entries.iter().enumerate().filter(|(_, e)| e.is_active())
    }

    pub fn of_degree(&self, d: usize) -> impl Iterator<Item = &BasisEntry> {
        self.entries.iter().filter(move |e| e.degree == d)
    }

    /// Index of the entry with the given bracket word.
    pub fn find(&self, word: &[usize]) -> Option<usize> {
        self.entries.iter().position(|e| e.word == word)
    }
}

/// Enumerates `[X_j1, [X_j2, …, X_jd]]` for every word of length `d ≤ q`.
///
/// Vanishing brackets stay in the list so entry indices depend only on `m`
/// and `q`. An entry equal to `±` an earlier entry of the same degree (as
/// `[X_2, X_1] = −[X_1, X_2]`) is marked as a duplicate and left out of the
/// determinant sums.
pub fn enumerate_commutators(sys: &FieldSystem, q: usize) -> CommutatorBasis {
    let mut entries: Vec<BasisEntry> = Vec::new();
    for (j, f) in sys.fields().iter().enumerate() {
        entries.push(BasisEntry {
            field: f.clone(),
            degree: 1,
            word: vec![j],
            zero: f.is_zero(),
            duplicate_of: None,
        });
    }
    let mut prev: Vec<usize> = (0..entries.len()).collect();
    for d in 2..=q {
        let mut layer = Vec::new();
        for (j, xj) in sys.fields().iter().enumerate() {
            for &p in &prev {
                let inner = &entries[p];
                let field = if inner.zero || xj.is_zero() {
                    VectorField::zero(sys.dim())
                } else {
                    bracket(xj, &inner.field).expect("fields share the system dimension")
                };
                let mut word = vec![j];
                word.extend_from_slice(&inner.word);
                let zero = field.is_zero();
                let duplicate_of = if zero {
                    None
                } else {
                    let neg = field.neg();
                    layer.iter().copied().find(|&i: &usize| {
                        let e: &BasisEntry = &entries[i];
                        !e.zero && e.duplicate_of.is_none() && (e.field == field || e.field == neg)
                    })
                };
                entries.push(BasisEntry {
                    field,
                    degree: d,
                    word,
                    zero,
                    duplicate_of,
                });
                layer.push(entries.len() - 1);
            }
        }
        prev = layer;
    }
    CommutatorBasis {
        dim: sys.dim(),
        max_degree: q,
        entries,
    }
}
