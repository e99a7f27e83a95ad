//! Deterministic finite automata: the extraction targets, partition
//! refinement minimization, product-automaton equivalence, and a plain-text
//! serialization for golden tests.

use std::collections::VecDeque;

use crate::words::Word;
use crate::{Error, Result};

/// A total DFA over an explicit alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dfa {
    alphabet: Vec<String>,
    start: usize,
    accepting: Vec<bool>,
    /// `transitions[state][symbol]`.
    transitions: Vec<Vec<usize>>,
}

impl Dfa {
    pub fn new(
        alphabet: Vec<String>,
        start: usize,
        accepting: Vec<bool>,
        transitions: Vec<Vec<usize>>,
    ) -> Result<Self> {
        if alphabet.is_empty() {
            return Err(Error::InvalidDfa("empty alphabet".into()));
        }
        let states = accepting.len();
        if states == 0 {
            return Err(Error::InvalidDfa("no states".into()));
        }
        if transitions.len() != states {
            return Err(Error::InvalidDfa("transition table height mismatch".into()));
        }
        if start >= states {
            return Err(Error::InvalidDfa("start state out of range".into()));
        }
        for (q, row) in transitions.iter().enumerate() {
            if row.len() != alphabet.len() {
                return Err(Error::InvalidDfa(format!("state {q} is not total")));
            }
            if let Some(&target) = row.iter().find(|&&t| t >= states) {
                return Err(Error::InvalidDfa(format!(
                    "state {q} jumps to missing state {target}"
                )));
            }
        }
        Ok(Dfa { alphabet, start, accepting, transitions })
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn state_count(&self) -> usize {
        self.accepting.len()
    }

    pub fn is_accepting(&self, state: usize) -> bool {
        self.accepting[state]
    }

    pub fn step(&self, state: usize, symbol: usize) -> usize {
        self.transitions[state][symbol]
    }

    pub fn run(&self, word: &Word) -> usize {
        word.symbols().fold(self.start, |q, s| self.step(q, s))
    }

    pub fn accepts(&self, word: &Word) -> bool {
        self.accepting[self.run(word)]
    }

    /// States reachable from the start, in BFS discovery order.
    fn reachable(&self) -> Vec<usize> {
        let mut order = Vec::new();
        let mut seen = vec![false; self.state_count()];
        let mut queue = VecDeque::from([self.start]);
        seen[self.start] = true;
        while let Some(q) = queue.pop_front() {
            order.push(q);
            for s in 0..self.alphabet.len() {
                let t = self.step(q, s);
                if !seen[t] {
                    seen[t] = true;
                    queue.push_back(t);
                }
            }
        }
        order
    }

    /// Isomorphism-canonical form: reachable states renumbered in BFS order
    /// (symbols in alphabet order). Two minimal DFAs recognize the same
    /// language iff their canonical forms are identical.
    pub fn canonicalize(&self) -> Dfa {
        let order = self.reachable();
        let mut rename = vec![usize::MAX; self.state_count()];
        for (new, &old) in order.iter().enumerate() {
            rename[old] = new;
        }
        let accepting = order.iter().map(|&q| self.accepting[q]).collect();
        let transitions = order
            .iter()
            .map(|&q| (0..self.alphabet.len()).map(|s| rename[self.step(q, s)]).collect())
            .collect();
        Dfa {
            alphabet: self.alphabet.clone(),
            start: 0,
            accepting,
            transitions,
        }
    }

    /// Plain-text serialization: header lines for the alphabet, start and
    /// accepting states, then one line per transition `state symbol state`.
    /// The format is bit-exact for golden tests.
    pub fn to_text(&self) -> String {
        let mut out = String::from("dfa-v1\n");
        out.push_str(&format!("alphabet {}\n", self.alphabet.join(" ")));
        out.push_str(&format!("states {}\n", self.state_count()));
        out.push_str(&format!("start {}\n", self.start));
        let accepting: Vec<String> = (0..self.state_count())
            .filter(|&q| self.accepting[q])
            .map(|q| q.to_string())
            .collect();
        out.push_str(&format!("accepting {}\n", accepting.join(" ")));
        for (q, row) in self.transitions.iter().enumerate() {
            for (s, &t) in row.iter().enumerate() {
                out.push_str(&format!("{q} {} {t}\n", self.alphabet[s]));
            }
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Dfa> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let bad = |msg: &str| Error::InvalidDfa(msg.to_string());
        if lines.next().map(str::trim) != Some("dfa-v1") {
            return Err(bad("missing dfa-v1 header"));
        }
        let mut alphabet: Vec<String> = Vec::new();
        let mut states = 0usize;
        let mut start = 0usize;
        let mut accepting_ids: Vec<usize> = Vec::new();
        let mut triples: Vec<(usize, String, usize)> = Vec::new();
        for line in lines {
            let fields: Vec<&str> = line.split_whitespace().collect();
            match fields.as_slice() {
                ["alphabet", rest @ ..] => {
                    alphabet = rest.iter().map(|s| s.to_string()).collect();
                }
                ["states", n] => states = n.parse().map_err(|_| bad("bad state count"))?,
                ["start", q] => start = q.parse().map_err(|_| bad("bad start state"))?,
                ["accepting", rest @ ..] => {
                    accepting_ids = rest
                        .iter()
                        .map(|q| q.parse().map_err(|_| bad("bad accepting state")))
                        .collect::<Result<_>>()?;
                }
                [q, symbol, t] => triples.push((
                    q.parse().map_err(|_| bad("bad source state"))?,
                    symbol.to_string(),
                    t.parse().map_err(|_| bad("bad target state"))?,
                )),
                _ => return Err(bad(&format!("unparseable line `{line}`"))),
            }
        }
        let mut accepting = vec![false; states];
        for q in accepting_ids {
            *accepting.get_mut(q).ok_or_else(|| bad("accepting state out of range"))? = true;
        }
        let mut transitions = vec![vec![usize::MAX; alphabet.len()]; states];
        for (q, symbol, t) in triples {
            let s = alphabet
                .iter()
                .position(|a| *a == symbol)
                .ok_or_else(|| bad(&format!("unknown symbol `{symbol}`")))?;
            *transitions
                .get_mut(q)
                .and_then(|row| row.get_mut(s))
                .ok_or_else(|| bad("transition out of range"))? = t;
        }
        if transitions.iter().any(|row| row.contains(&usize::MAX)) {
            return Err(bad("transition table is not total"));
        }
        Dfa::new(alphabet, start, accepting, transitions)
    }
}

/// Moore-style partition refinement on the reachable part; the result is the
/// minimal DFA in canonical (BFS-renumbered) form.
pub fn minimize(dfa: &Dfa) -> Dfa {
    let reachable = dfa.reachable();
    let index_of = {
        let mut map = vec![usize::MAX; dfa.state_count()];
        for (i, &q) in reachable.iter().enumerate() {
            map[q] = i;
        }
        map
    };
    let k = dfa.alphabet().len();
    // Block id per reachable state, seeded by the accepting flag.
    let mut block: Vec<usize> = reachable
        .iter()
        .map(|&q| usize::from(dfa.accepting[q]))
        .collect();
    loop {
        // Signature = (own block, successor blocks); renumber signatures by
        // first occurrence so the refinement is deterministic.
        let mut signatures: Vec<(usize, Vec<usize>)> = Vec::with_capacity(reachable.len());
        for (i, &q) in reachable.iter().enumerate() {
            let succ = (0..k).map(|s| block[index_of[dfa.step(q, s)]]).collect();
            signatures.push((block[i], succ));
        }
        let mut next_block = Vec::with_capacity(reachable.len());
        let mut seen: Vec<(usize, Vec<usize>)> = Vec::new();
        for sig in &signatures {
            match seen.iter().position(|s| s == sig) {
                Some(id) => next_block.push(id),
                None => {
                    next_block.push(seen.len());
                    seen.push(sig.clone());
                }
            }
        }
        // Signatures always refine the previous partition, so the fixpoint
        // is reached when the partition is unchanged modulo renaming.
        let stable = next_block == renumber_by_first_occurrence(&block);
        block = next_block;
        if stable {
            break;
        }
    }
    let classes = block.iter().max().map_or(1, |&m| m + 1);
    let mut accepting = vec![false; classes];
    let mut transitions = vec![vec![0usize; k]; classes];
    for (i, &q) in reachable.iter().enumerate() {
        accepting[block[i]] = dfa.accepting[q];
        for s in 0..k {
            transitions[block[i]][s] = block[index_of[dfa.step(q, s)]];
        }
    }
    let start = block[index_of[dfa.start]];
    Dfa::new(dfa.alphabet().to_vec(), start, accepting, transitions)
        .expect("quotient of a valid DFA is valid")
        .canonicalize()
}

fn renumber_by_first_occurrence(block: &[usize]) -> Vec<usize> {
    let mut seen: Vec<usize> = Vec::new();
    block
        .iter()
        .map(|&b| match seen.iter().position(|&s| s == b) {
            Some(id) => id,
            None => {
                seen.push(b);
                seen.len() - 1
            }
        })
        .collect()
}

/// Outcome of a language-equivalence check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Equivalence {
    Equal,
    /// A shortest word accepted by exactly one of the two automata.
    Counterexample(Word),
}

impl Equivalence {
    pub fn is_equal(&self) -> bool {
        matches!(self, Equivalence::Equal)
    }
}

/// Product-automaton reachability over accept-flag disagreements; returns a
/// shortest counterexample when the languages differ.
pub fn dfa_equiv(a: &Dfa, b: &Dfa) -> Result<Equivalence> {
    if a.alphabet() != b.alphabet() {
        return Err(Error::AlphabetMismatch);
    }
    let k = a.alphabet().len();
    let mut seen = vec![false; a.state_count() * b.state_count()];
    let id = |qa: usize, qb: usize| qa * b.state_count() + qb;
    let mut queue: VecDeque<(usize, usize, Word)> = VecDeque::new();
    seen[id(a.start, b.start)] = true;
    queue.push_back((a.start, b.start, Word::empty()));
    while let Some((qa, qb, word)) = queue.pop_front() {
        if a.accepting[qa] != b.accepting[qb] {
            return Ok(Equivalence::Counterexample(word));
        }
        for s in 0..k {
            let (ta, tb) = (a.step(qa, s), b.step(qb, s));
            if !seen[id(ta, tb)] {
                seen[id(ta, tb)] = true;
                queue.push_back((ta, tb, word.extended(s)));
            }
        }
    }
    Ok(Equivalence::Equal)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Vec<String> {
        vec!["a".into(), "b".into()]
    }

    /// Minimal two-state automaton for "ends in a".
    fn ends_in_a() -> Dfa {
        Dfa::new(
            ab(),
            0,
            vec![false, true],
            vec![vec![1, 0], vec![1, 0]],
        )
        .unwrap()
    }

    /// Same language with a redundant third state.
    fn ends_in_a_redundant() -> Dfa {
        Dfa::new(
            ab(),
            0,
            vec![false, true, true],
            vec![vec![1, 0], vec![2, 0], vec![1, 0]],
        )
        .unwrap()
    }

    fn ends_in_b() -> Dfa {
        Dfa::new(
            ab(),
            0,
            vec![false, true],
            vec![vec![0, 1], vec![0, 1]],
        )
        .unwrap()
    }

    #[test]
    fn identical_dfas_are_equal() {
        assert!(dfa_equiv(&ends_in_a(), &ends_in_a()).unwrap().is_equal());
    }

    #[test]
    fn minimization_collapses_redundant_states() {
        let min = minimize(&ends_in_a_redundant());
        assert_eq!(min.state_count(), 2);
        assert!(dfa_equiv(&min, &ends_in_a_redundant()).unwrap().is_equal());
        assert_eq!(min, ends_in_a().canonicalize());
    }

    #[test]
    fn shortest_counterexample_between_ends_in_a_and_ends_in_b() {
        match dfa_equiv(&ends_in_a(), &ends_in_b()).unwrap() {
            Equivalence::Counterexample(w) => {
                assert_eq!(w, Word::from_indices([0])); // "a"
            }
            Equivalence::Equal => panic!("different languages"),
        }
    }

    #[test]
    fn unreachable_states_do_not_affect_minimization() {
        let with_junk = Dfa::new(
            ab(),
            0,
            vec![false, true, false],
            vec![vec![1, 0], vec![1, 0], vec![2, 2]],
        )
        .unwrap();
        let min = minimize(&with_junk);
        assert_eq!(min.state_count(), 2);
        assert!(dfa_equiv(&min, &ends_in_a()).unwrap().is_equal());
    }

    #[test]
    fn all_states_equivalent_collapse_to_one() {
        let uniform = Dfa::new(
            ab(),
            0,
            vec![true, true, true],
            vec![vec![1, 2], vec![2, 0], vec![0, 1]],
        )
        .unwrap();
        let min = minimize(&uniform);
        assert_eq!(min.state_count(), 1);
    }

    #[test]
    fn text_round_trip_is_exact() {
        let dfa = ends_in_a_redundant();
        let text = dfa.to_text();
        let back = Dfa::from_text(&text).unwrap();
        assert_eq!(dfa, back);
        assert_eq!(text, back.to_text());
        assert!(text.starts_with("dfa-v1\nalphabet a b\nstates 3\nstart 0\naccepting 1 2\n"));
    }

    #[test]
    fn alphabet_mismatch_is_an_error() {
        let other = Dfa::new(
            vec!["x".into(), "y".into()],
            0,
            vec![true],
            vec![vec![0, 0]],
        )
        .unwrap();
        assert!(matches!(dfa_equiv(&ends_in_a(), &other), Err(Error::AlphabetMismatch)));
    }
}
