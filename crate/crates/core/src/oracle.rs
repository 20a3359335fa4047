//! Ground-truth brute force: breadth-first word lengths in Cayley graphs
//! and exhaustive conjugator searches.
//!
//! These oracles certify the closed metric formulas and the analytic
//! conjugacy procedures at desk scale.  They share no code with the
//! formulas they check: everything here is plain BFS over canonical forms.
//!
//! For the `q = 2` lamplighter a bit-packed sweep ([`ll_conj_table_q2`])
//! computes minimal conjugator lengths for *every* pair from a small ball in
//! one pass over a large ball, which is what makes the exhaustive
//! decision-agreement run affordable.

use crate::bs::{BSElement, BsGroup};
use crate::exactnum::LaurentPoly;
use crate::group::Group;
use crate::lamplighter::{LLElement, LamplighterGroup};
use crate::polycyclic::{PCElement, PCGroupSpec};
use crate::{Error, Result};
use std::collections::{HashMap, HashSet, VecDeque};

/// Default memory budget for BFS state sets: 2 GiB.
pub const DEFAULT_MEM_LIMIT: u64 = 2 << 30;

/// Nominal bytes charged per generic BFS state.
const GENERIC_STATE_COST: u64 = 192;
/// Bytes charged per live packed BFS state (the live count already includes
/// the merge transients).
const PACKED_STATE_COST: u64 = 8;

/// A symmetric generating set with a family tag.
#[derive(Debug, Clone)]
pub struct GeneratingSet<E> {
    pub family: &'static str,
    pub elems: Vec<E>,
}

fn close_under_inverse<G: Group>(
    group: &G,
    family: &'static str,
    base: Vec<G::Elem>,
) -> GeneratingSet<G::Elem> {
    let mut elems = base;
    for g in elems.clone() {
        let inv = group.inv(&g);
        if !elems.contains(&inv) {
            elems.push(inv);
        }
    }
    GeneratingSet { family, elems }
}

/// `{(1, b) : b in Z_q}` and inverses: the generating set for which the
/// Cayley graph is `DL_2(q)`.
pub fn lamplighter_gens(q: u64) -> GeneratingSet<LLElement> {
    let group = LamplighterGroup { q };
    let base = (0..q)
        .map(|b| {
            LLElement::new(
                q,
                1,
                LaurentPoly::monomial(q, 0, b as i64).expect("valid modulus"),
            )
            .expect("matching modulus")
        })
        .collect();
    close_under_inverse(&group, "lamplighter", base)
}

/// `{a, b}` and inverses, from the one-relator presentation of `BS(1, q)`.
pub fn bs_gens(q: u64) -> GeneratingSet<BSElement> {
    let group = BsGroup { q };
    close_under_inverse(&group, "bs", vec![BSElement::gen_a(q), BSElement::gen_b(q)])
}

/// Standard basis vectors of `Z^n` and `Z^k`, with inverses.
pub fn pc_gens(spec: &PCGroupSpec) -> GeneratingSet<PCElement> {
    let mut base = Vec::new();
    for i in 0..spec.dim_n() {
        let mut a = vec![0i64; spec.dim_n()];
        a[i] = 1;
        base.push(spec.element(a, vec![0; spec.dim_k()]).expect("shape"));
    }
    for j in 0..spec.dim_k() {
        let mut b = vec![0i64; spec.dim_k()];
        b[j] = 1;
        base.push(spec.element(vec![0; spec.dim_n()], b).expect("shape"));
    }
    close_under_inverse(spec, "polycyclic", base)
}

/// Exact ball of the word metric: `(element, length)` in BFS order.
pub fn enumerate_ball<G: Group>(
    group: &G,
    gens: &GeneratingSet<G::Elem>,
    radius: u32,
    mem_limit: u64,
) -> Result<Vec<(G::Elem, u32)>> {
    let mut out = Vec::new();
    let mut seen: HashSet<G::Elem> = HashSet::new();
    let mut queue: VecDeque<(G::Elem, u32)> = VecDeque::new();
    let id = group.identity();
    seen.insert(id.clone());
    queue.push_back((id, 0));
    while let Some((g, d)) = queue.pop_front() {
        out.push((g.clone(), d));
        if d == radius {
            continue;
        }
        for s in &gens.elems {
            let h = group.mul(&g, s);
            if seen.insert(h.clone()) {
                if seen.len() as u64 * GENERIC_STATE_COST > mem_limit {
                    return Err(Error::ResourceLimit(seen.len() as u64, mem_limit));
                }
                queue.push_back((h, d + 1));
            }
        }
    }
    Ok(out)
}

/// Exact word length of `g`, or an out-of-range report when `g` lies
/// outside the ball of the given radius (never a silent wrong answer).
pub fn bfs_word_length<G: Group>(
    group: &G,
    gens: &GeneratingSet<G::Elem>,
    g: &G::Elem,
    max_radius: u32,
    mem_limit: u64,
) -> Result<u32> {
    let mut seen: HashSet<G::Elem> = HashSet::new();
    let mut queue: VecDeque<(G::Elem, u32)> = VecDeque::new();
    let id = group.identity();
    if *g == id {
        return Ok(0);
    }
    seen.insert(id.clone());
    queue.push_back((id, 0));
    while let Some((h, d)) = queue.pop_front() {
        if d == max_radius {
            continue;
        }
        for s in &gens.elems {
            let next = group.mul(&h, s);
            if next == *g {
                return Ok(d + 1);
            }
            if seen.insert(next.clone()) {
                if seen.len() as u64 * GENERIC_STATE_COST > mem_limit {
                    return Err(Error::ResourceLimit(seen.len() as u64, mem_limit));
                }
                queue.push_back((next, d + 1));
            }
        }
    }
    Err(Error::OutOfRange(max_radius))
}

/// First conjugator in BFS order with `u * g = g * v`, within the radius.
///
/// A `None` is only a certificate of non-conjugacy when a theorem bounds
/// the conjugator length by the radius; the caller knows which.
pub fn brute_conjugator<G: Group>(
    group: &G,
    gens: &GeneratingSet<G::Elem>,
    u: &G::Elem,
    v: &G::Elem,
    radius: u32,
    mem_limit: u64,
) -> Result<Option<G::Elem>> {
    let mut seen: HashSet<G::Elem> = HashSet::new();
    let mut queue: VecDeque<(G::Elem, u32)> = VecDeque::new();
    let id = group.identity();
    seen.insert(id.clone());
    queue.push_back((id, 0));
    while let Some((g, d)) = queue.pop_front() {
        if group.mul(u, &g) == group.mul(&g, v) {
            return Ok(Some(g));
        }
        if d == radius {
            continue;
        }
        for s in &gens.elems {
            let h = group.mul(&g, s);
            if seen.insert(h.clone()) {
                if seen.len() as u64 * GENERIC_STATE_COST > mem_limit {
                    return Err(Error::ResourceLimit(seen.len() as u64, mem_limit));
                }
                queue.push_back((h, d + 1));
            }
        }
    }
    Ok(None)
}

/// Minimal conjugator lengths between all pairs of a small `q = 2`
/// lamplighter ball, computed by one packed sweep of the big ball.
pub struct LamplighterConjTable {
    /// Ball elements in BFS order with their exact lengths.
    pub elements: Vec<(LLElement, u32)>,
    /// Conjugator search radius of the sweep.
    pub conj_radius: u32,
    min_len: HashMap<(u32, u32), u32>,
}

impl LamplighterConjTable {
    /// Least conjugator length between elements `i` and `j` of the ball,
    /// or `None` when no conjugator of length `<= conj_radius` exists.
    pub fn min_conjugator_len(&self, i: usize, j: usize) -> Option<u32> {
        self.min_len.get(&(i as u32, j as u32)).copied()
    }
}

/// Packed-state encoding for `q = 2`: lamp bits in a `[-radius, radius)`
/// window plus the shift.  Requires `2*radius + ceil(log2(2*radius+2))
/// <= 64`, so radius at most 28.
struct Packing {
    radius: i64,
}

impl Packing {
    fn key(&self, n: i64, bits: u64) -> u64 {
        bits | (((n + self.radius) as u64) << (2 * self.radius))
    }

    fn unpack(&self, key: u64) -> (i64, u64) {
        let mask = (1u64 << (2 * self.radius)) - 1;
        ((key >> (2 * self.radius)) as i64 - self.radius, key & mask)
    }
}

/// Build the pair table: every element of `ball(elem_radius)` against every
/// other, with minimal conjugator lengths up to `conj_radius`.
///
/// Zero-shift pairs are handled by a direct scan over conjugator shifts
/// (any lamp part works once the shift matches, so the minimum is `|n|`
/// over matching shifts).  Nonzero-shift pairs are collected during a
/// layered BFS of the big ball: a candidate conjugator `(n, f)` maps the
/// pair `(s, P) -> (s, t^-n (P + (t^s - 1) f))`, and a support-window mask
/// rejects almost every `(n, f, s)` triple in constant time.
pub fn ll_conj_table_q2(
    elem_radius: u32,
    conj_radius: u32,
    mem_limit: u64,
) -> Result<LamplighterConjTable> {
    let q = 2u64;
    if conj_radius > 28 {
        return Err(Error::InvalidArgument(
            "packed sweep supports conjugator radius at most 28".into(),
        ));
    }
    if elem_radius > conj_radius || elem_radius > 8 {
        return Err(Error::InvalidArgument(
            "element radius must be at most 8 and at most the conjugator radius".into(),
        ));
    }
    let group = LamplighterGroup { q };
    let gens = lamplighter_gens(q);
    let elements = enumerate_ball(&group, &gens, elem_radius, mem_limit)?;

    // Small-ball index keyed by (shift, packed lamps in [-er, er]).
    let er = elem_radius as i64;
    let small_bits = (2 * er + 1) as u32;
    let pack_small = |g: &LLElement| -> u64 {
        let mut bits = 0u64;
        for (exp, c) in g.lamps().terms() {
            debug_assert_eq!(c, 1);
            bits |= 1 << (exp + er) as u32;
        }
        bits | (((g.shift() + er) as u64) << small_bits)
    };
    let index: HashMap<u64, u32> = elements
        .iter()
        .enumerate()
        .map(|(i, (g, _))| (pack_small(g), i as u32))
        .collect();
    let by_shift: HashMap<i64, Vec<u32>> = {
        let mut m: HashMap<i64, Vec<u32>> = HashMap::new();
        for (i, (g, _)) in elements.iter().enumerate() {
            m.entry(g.shift()).or_default().push(i as u32);
        }
        m
    };

    let mut min_len: HashMap<(u32, u32), u32> = HashMap::new();

    // Zero-shift pairs: a conjugator needs P = t^n Q and costs |n| at best.
    for (i, (u, _)) in elements.iter().enumerate() {
        if u.shift() != 0 {
            continue;
        }
        for (j, (v, _)) in elements.iter().enumerate() {
            if v.shift() != 0 {
                continue;
            }
            let best = (-(conj_radius as i64)..=conj_radius as i64)
                .filter(|&n| *u.lamps() == v.lamps().shifted(n))
                .map(|n| n.unsigned_abs() as u32)
                .min();
            if let Some(b) = best {
                min_len.insert((i as u32, j as u32), b);
            }
        }
    }

    // Nonzero-shift pairs: layered packed BFS over conjugators.
    let pk = Packing {
        radius: conj_radius as i64,
    };
    let shifts: Vec<i64> = {
        let mut s: Vec<i64> = by_shift.keys().copied().filter(|&s| s != 0).collect();
        s.sort_unstable();
        s
    };
    // Lamp polynomials of the small ball, re-packed into the wide u128
    // window used for the (t^s - 1) f masks: offset radius + 8.
    let woff = conj_radius as i64 + 8;
    let widen = |g: &LLElement| -> u128 {
        let mut bits = 0u128;
        for (exp, _) in g.lamps().terms() {
            bits |= 1 << (exp + woff) as u32;
        }
        bits
    };
    let wide_polys: Vec<u128> = elements.iter().map(|(g, _)| widen(g)).collect();

    let record = |key: u64, depth: u32, min_len: &mut HashMap<(u32, u32), u32>| {
        let (n, bits) = pk.unpack(key);
        let f_wide = (bits as u128) << 8;
        for &s in &shifts {
            // (t^s - 1) f in the wide window.
            let moved = if s >= 0 {
                f_wide << s as u32
            } else {
                f_wide >> (-s) as u32
            };
            let w = moved ^ f_wide;
            // Support of t^n Q - P is confined to [min(n,0)-er, max(n,0)+er].
            let lo = n.min(0) - er + woff;
            let hi = n.max(0) + er + woff;
            let window = if hi - lo + 1 >= 128 {
                u128::MAX
            } else {
                ((1u128 << (hi - lo + 1)) - 1) << lo
            };
            if w & !window != 0 {
                continue;
            }
            let Some(us) = by_shift.get(&s) else { continue };
            for &ui in us {
                let pv = wide_polys[ui as usize] ^ w;
                // v's lamps must fit the small window shifted by n.
                let vlo = n - er + woff;
                let vwindow = ((1u128 << (2 * er + 1)) - 1) << vlo;
                if pv & !vwindow != 0 {
                    continue;
                }
                let v_bits = (pv >> vlo) as u64;
                let v_key = v_bits | (((s + er) as u64) << small_bits);
                if let Some(&vi) = index.get(&v_key) {
                    min_len.entry((ui, vi)).or_insert(depth);
                }
            }
        }
    };

    // Depth-layered BFS with sorted-vector deduplication; a generator step
    // always changes the shift parity, so a new state can only collide with
    // the layer two steps back.  Only two layers are kept live, and the
    // final layer is streamed without being stored: recording in ascending
    // depth order makes re-visits harmless (`or_insert` keeps the first,
    // i.e. minimal, depth).
    const CHUNK: usize = 1 << 22;
    let start = pk.key(0, 0);
    record(start, 0, &mut min_len);
    let mut prev: Vec<u64> = Vec::new();
    let mut cur: Vec<u64> = vec![start];
    let mut seen_states: u64 = 1;
    for depth in 1..=conj_radius {
        let expand = |key: u64, raw: &mut Vec<u64>| {
            let (n, bits) = pk.unpack(key);
            // Right moves from n set the lamp at n; left moves from n set
            // the lamp at n - 1.
            raw.push(pk.key(n + 1, bits));
            raw.push(pk.key(n + 1, bits ^ (1 << (n + pk.radius) as u32)));
            raw.push(pk.key(n - 1, bits));
            raw.push(pk.key(n - 1, bits ^ (1 << (n - 1 + pk.radius) as u32)));
        };
        if depth == conj_radius {
            // Last layer: record and forget.
            for chunk in cur.chunks(CHUNK) {
                let mut raw: Vec<u64> = Vec::with_capacity(chunk.len() * 4);
                for &key in chunk {
                    expand(key, &mut raw);
                }
                raw.sort_unstable();
                raw.dedup();
                for &key in &raw {
                    record(key, depth, &mut min_len);
                }
            }
            break;
        }
        let mut next: Vec<u64> = Vec::new();
        for chunk in cur.chunks(CHUNK) {
            let mut raw: Vec<u64> = Vec::with_capacity(chunk.len() * 4);
            for &key in chunk {
                expand(key, &mut raw);
            }
            raw.sort_unstable();
            raw.dedup();
            let live = (prev.len() + cur.len() + 2 * next.len() + raw.len()) as u64;
            if live * PACKED_STATE_COST > mem_limit {
                return Err(Error::ResourceLimit(seen_states + live, mem_limit));
            }
            next = merge_dedup(&next, &raw);
        }
        // Remove states already seen two layers back.
        next = diff_sorted(&next, &prev);
        seen_states += next.len() as u64;
        for &key in &next {
            record(key, depth, &mut min_len);
        }
        prev = std::mem::take(&mut cur);
        cur = next;
    }

    Ok(LamplighterConjTable {
        elements,
        conj_radius,
        min_len,
    })
}

fn merge_dedup(a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

fn diff_sorted(a: &[u64], remove: &[u64]) -> Vec<u64> {
    let mut out = Vec::with_capacity(a.len());
    let mut j = 0;
    for &x in a {
        while j < remove.len() && remove[j] < x {
            j += 1;
        }
        if j < remove.len() && remove[j] == x {
            continue;
        }
        out.push(x);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radius_zero_ball_is_identity() {
        let group = LamplighterGroup { q: 2 };
        let gens = lamplighter_gens(2);
        let ball = enumerate_ball(&group, &gens, 0, DEFAULT_MEM_LIMIT).unwrap();
        assert_eq!(ball.len(), 1);
        assert!(ball[0].0.is_identity());
    }

    #[test]
    fn lamplighter_radius_one_ball() {
        let group = LamplighterGroup { q: 2 };
        let gens = lamplighter_gens(2);
        let ball = enumerate_ball(&group, &gens, 1, DEFAULT_MEM_LIMIT).unwrap();
        // id, (1,0), (1,1), (-1,0), (-1,t^-1)
        assert_eq!(ball.len(), 5);
        let el = |n: i64, f: &str| LLElement::new(2, n, LaurentPoly::parse(f, 2).unwrap()).unwrap();
        for g in [el(1, ""), el(1, "1@0"), el(-1, ""), el(-1, "1@-1")] {
            assert!(ball.iter().any(|(h, d)| *h == g && *d == 1));
        }
    }

    #[test]
    fn bs_radius_one_ball() {
        let group = BsGroup { q: 2 };
        let gens = bs_gens(2);
        let ball = enumerate_ball(&group, &gens, 1, DEFAULT_MEM_LIMIT).unwrap();
        assert_eq!(ball.len(), 5);
    }

    #[test]
    fn balls_are_nested_and_monotone() {
        let group = LamplighterGroup { q: 3 };
        let gens = lamplighter_gens(3);
        let mut last = 0;
        for r in 0..4 {
            let ball = enumerate_ball(&group, &gens, r, DEFAULT_MEM_LIMIT).unwrap();
            assert!(ball.len() > last);
            last = ball.len();
        }
    }

    #[test]
    fn bfs_word_length_examples() {
        let group = LamplighterGroup { q: 2 };
        let gens = lamplighter_gens(2);
        let id = group.identity();
        assert_eq!(
            bfs_word_length(&group, &gens, &id, 4, DEFAULT_MEM_LIMIT).unwrap(),
            0
        );
        for s in &gens.elems {
            assert_eq!(
                bfs_word_length(&group, &gens, s, 4, DEFAULT_MEM_LIMIT).unwrap(),
                1
            );
        }
        let g = LLElement::new(2, 0, LaurentPoly::parse("1@0,1@2", 2).unwrap()).unwrap();
        assert_eq!(
            bfs_word_length(&group, &gens, &g, 8, DEFAULT_MEM_LIMIT).unwrap(),
            6
        );
        // Out of range is an error, not a wrong answer.
        assert!(matches!(
            bfs_word_length(&group, &gens, &g, 3, DEFAULT_MEM_LIMIT),
            Err(Error::OutOfRange(3))
        ));
    }

    #[test]
    fn brute_conjugator_examples() {
        let group = LamplighterGroup { q: 2 };
        let gens = lamplighter_gens(2);
        let el = |n: i64, f: &str| LLElement::new(2, n, LaurentPoly::parse(f, 2).unwrap()).unwrap();
        // u = v: identity at radius 0.
        let u = el(1, "1@0");
        let w = brute_conjugator(&group, &gens, &u, &u, 0, DEFAULT_MEM_LIMIT)
            .unwrap()
            .unwrap();
        assert!(w.is_identity());
        // u = (0,1), v = (0,t): a witness of length <= 6 exists.
        let u = el(0, "1@0");
        let v = el(0, "1@1");
        let w = brute_conjugator(&group, &gens, &u, &v, 6, DEFAULT_MEM_LIMIT)
            .unwrap()
            .unwrap();
        assert_eq!(group.mul(&u, &w), group.mul(&w, &v));
        // u = (0,1), v = (0,1+t): none within 3(|u|+|v|).
        let v = el(0, "1@0,1@1");
        let radius = 3 * (u.word_length() + v.word_length()) as u32;
        assert!(
            brute_conjugator(&group, &gens, &u, &v, radius, DEFAULT_MEM_LIMIT)
                .unwrap()
                .is_none()
        );
    }

    #[test]
    fn memory_budget_is_enforced() {
        let group = LamplighterGroup { q: 2 };
        let gens = lamplighter_gens(2);
        let err = enumerate_ball(&group, &gens, 10, 4096).unwrap_err();
        assert!(matches!(err, Error::ResourceLimit(_, 4096)));
    }

    #[test]
    fn packed_table_agrees_with_generic_brute_force() {
        let table = ll_conj_table_q2(2, 8, DEFAULT_MEM_LIMIT).unwrap();
        let group = LamplighterGroup { q: 2 };
        let gens = lamplighter_gens(2);
        for (i, (u, _)) in table.elements.iter().enumerate() {
            for (j, (v, _)) in table.elements.iter().enumerate() {
                let found = brute_conjugator(&group, &gens, u, v, 8, DEFAULT_MEM_LIMIT).unwrap();
                match (found, table.min_conjugator_len(i, j)) {
                    (Some(w), Some(len)) => {
                        assert!(w.word_length() <= 8);
                        assert_eq!(w.word_length() as u32, len, "pair {u} ~ {v}");
                    }
                    (None, None) => {}
                    (a, b) => panic!("disagreement for {u} ~ {v}: generic {a:?}, packed {b:?}"),
                }
            }
        }
    }
}
