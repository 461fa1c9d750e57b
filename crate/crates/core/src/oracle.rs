//! Slow, definition-level implementations used only to cross-check the
//! fast code paths.

use crate::coeffs::{Coeff, Indeterminate, Monomial};
use crate::ncalgebra::{Atom, Word};

/// Index of the leftmost redex and the atoms that replace the pair there.
fn redexes(atoms: &[Atom]) -> impl Iterator<Item = (usize, Vec<Atom>)> + '_ {
    atoms.windows(2).enumerate().filter_map(|(i, pair)| {
        let replacement = match (&pair[0], &pair[1]) {
            (Atom::Y, Atom::X) => vec![Atom::Weight(Monomial::var(Indeterminate::w(1, 1))), Atom::X, Atom::Y],
            (Atom::X, Atom::Weight(m)) => vec![Atom::Weight(m.shifted(1, 0)), Atom::X],
            (Atom::Y, Atom::Weight(m)) => vec![Atom::Weight(m.shifted(0, 1)), Atom::Y],
            _ => return None,
        };
        Some((i, replacement))
    })
}

fn apply(atoms: &[Atom], at: usize, replacement: Vec<Atom>) -> Vec<Atom> {
    let mut out = atoms[..at].to_vec();
    out.extend(replacement);
    out.extend_from_slice(&atoms[at + 2..]);
    out
}

/// Every word reachable from `word` by one application of a defining
/// relation, read left to right.
pub fn single_rewrites(word: &Word) -> Vec<Word> {
    redexes(word.atoms()).map(|(i, r)| Word(apply(word.atoms(), i, r))).collect()
}

/// Exhaustive leftmost rewriting with the defining relations until no
/// `yx`, `x·w`, `y·w` pattern is left. Returns `(k, l, c)` with
/// `word = c·x^k y^l`.
pub fn naive_normalize(word: &Word) -> (u32, u32, Monomial) {
    let mut atoms = word.atoms().to_vec();
    loop {
        let next = redexes(&atoms).next();
        match next {
            Some((i, r)) => atoms = apply(&atoms, i, r),
            None => break,
        }
    }
    let mut coeff = Monomial::one();
    let (mut k, mut l) = (0, 0);
    for atom in atoms {
        match atom {
            Atom::Weight(m) => {
                assert!(k == 0 && l == 0, "weight left behind a generator");
                coeff = coeff.mul(&m);
            }
            Atom::X => {
                assert!(l == 0, "x left behind y");
                k += 1;
            }
            Atom::Y => l += 1,
        }
    }
    (k, l, coeff)
}

/// Every word of length exactly `len` over `alphabet`.
pub fn all_words(alphabet: &[Atom], len: usize) -> Vec<Word> {
    let mut words = vec![Vec::new()];
    for _ in 0..len {
        words = words
            .into_iter()
            .flat_map(|w: Vec<Atom>| {
                alphabet.iter().map(move |a| {
                    let mut next = w.clone();
                    next.push(a.clone());
                    next
                })
            })
            .collect();
    }
    words.into_iter().map(Word).collect()
}

fn multisets(k: usize, from: usize, to: usize, strict: bool, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if prefix.len() == k {
        out.push(prefix.clone());
        return;
    }
    let lo = match prefix.last() {
        Some(&j) if strict => j + 1,
        Some(&j) => j,
        None => from,
    };
    for j in lo..to {
        prefix.push(j);
        multisets(k, from, to, strict, prefix, out);
        prefix.pop();
    }
}

fn monomial_sum<C: Coeff>(k: usize, vars: &[C], strict: bool) -> C {
    let mut tuples = Vec::new();
    multisets(k, 0, vars.len(), strict, &mut Vec::new(), &mut tuples);
    tuples
        .into_iter()
        .map(|t| t.into_iter().fold(C::one(), |acc, j| acc * vars[j].clone()))
        .fold(C::zero(), |acc, x| acc + x)
}

/// `h_k` as the sum over weakly increasing index tuples.
pub fn h_by_definition<C: Coeff>(k: usize, vars: &[C]) -> C {
    monomial_sum(k, vars, false)
}

/// `e_k` as the sum over strictly increasing index tuples.
pub fn e_by_definition<C: Coeff>(k: usize, vars: &[C]) -> C {
    monomial_sum(k, vars, true)
}

/// Number of partitions of `{1..n}` into exactly `k` nonempty blocks, by
/// enumerating restricted growth strings.
pub fn set_partitions(n: u32, k: u32) -> u64 {
    fn go(pos: u32, n: u32, blocks: u32, k: u32) -> u64 {
        if pos == n {
            return u64::from(blocks == k);
        }
        if blocks + (n - pos) < k {
            return 0;
        }
        // Join one of the existing blocks, or open a new one.
        let mut count = u64::from(blocks) * go(pos + 1, n, blocks, k);
        if blocks < k {
            count += go(pos + 1, n, blocks + 1, k);
        }
        count
    }
    go(0, n, 0, k)
}

/// Signed Stirling numbers of the first kind `s(n,k)`: the coefficients of
/// the falling factorial `x(x−1)⋯(x−n+1)`.
pub fn stirling_first_signed(n: u32, k: u32) -> i64 {
    let mut poly = vec![1i64];
    for j in 0..n {
        let mut next = vec![0i64; poly.len() + 1];
        for (i, &c) in poly.iter().enumerate() {
            next[i + 1] += c;
            next[i] -= i64::from(j) * c;
        }
        poly = next;
    }
    poly.get(k as usize).copied().unwrap_or(0)
}
