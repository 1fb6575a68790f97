//! End-to-end acceptance suite. Each criterion runs under a wall-clock
//! limit and prints one PASS/FAIL line; the process fails if any does.

use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use freeze_core::ara::{ltl_to_ara, parse_automaton, rejection_point, run_exists, AlternatingAutomaton, Flag, PosBool};
use freeze_core::data::{all_strings, all_words, canonical_class_sequences};
use freeze_core::gen;
use freeze_core::ipcant::{
    check_distributive, compute_bound, fire, fire_lazy, sqsse, Counter, Instruction, Semantics, Transfer, Valuation,
};
use freeze_core::ltl::{parse_ltl_file, Formula};
use freeze_core::pipeline::{
    accepts_prefix, ara_to_ipcant, encode_tm_run, inclusion_check, oracle_run_exists, parse_tm, refine,
    tm_to_formula, InclusionVerdict, TuringMachine,
};
use freeze_core::{Alphabet, DataWord};

type Outcome = Result<String, String>;

/// Number, time limit in seconds, check.
type Criterion = (u32, u64, fn() -> Outcome);

fn corpus(name: &str) -> String {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "corpus", name].iter().collect();
    fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn acb() -> AlternatingAutomaton {
    parse_automaton(&corpus("acb.ara")).expect("acb parses")
}

fn example() -> (Alphabet, Formula) {
    let f = parse_ltl_file(&corpus("example.ltl")).expect("example parses");
    (f.alphabet, f.formula)
}

/// Whether `w` has an `a`, later a `c`, later a `b` in the `a`'s class.
fn has_pattern(w: &DataWord, al: &Alphabet) -> bool {
    let (a, b, c) = (al.letter("a").unwrap(), al.letter("b").unwrap(), al.letter("c").unwrap());
    let n = w.len();
    (0..n).any(|i| {
        w.letter(i) == a
            && (i + 1..n).any(|j| {
                w.letter(j) == c && (j + 1..n).any(|k| w.letter(k) == b && w.class(k) == w.class(i))
            })
    })
}

fn criterion1() -> Outcome {
    let hand = acb();
    let (al, f) = example();
    let translated = ltl_to_ara(&f, &al).map_err(|e| e.to_string())?;
    let mut count = 0;
    for len in 1..=5 {
        for w in all_words(&al, len, 3) {
            let expected = !has_pattern(&w, &al);
            let x = run_exists(&hand, &w).map_err(|e| e.to_string())?;
            let y = run_exists(&translated, &w).map_err(|e| e.to_string())?;
            if x != expected || y != expected {
                return Err(format!("{}: oracle {expected}, acb {x}, translated {y}", w.display(&al)));
            }
            count += 1;
        }
    }
    Ok(format!("{count} words agree"))
}

fn criterion2() -> Outcome {
    let (al, f) = example();
    let a = ltl_to_ara(&f, &al).map_err(|e| e.to_string())?;
    let hand = acb();
    match (a.state_count(), hand.state_count()) {
        (3, 3) => Ok("3 states".into()),
        (x, y) => Err(format!("translation has {x} states, acb has {y}")),
    }
}

/// Every antichain of subsets of `0..atoms`, as a bit mask over subsets.
fn antichains(atoms: usize) -> Vec<Vec<u32>> {
    let subsets = 1u32 << atoms;
    let mut out = Vec::new();
    for family in 0u64..1 << subsets {
        let members: Vec<u32> = (0..subsets).filter(|s| family >> s & 1 == 1).collect();
        let ok = members
            .iter()
            .all(|&s| members.iter().all(|&t| s == t || s & t != s));
        if ok {
            out.push(members);
        }
    }
    out
}

/// The monotone formula whose minimal models are `family`; atom `i < n` is
/// state `i`, atom `n + i` is `d(i)`.
fn dnf(family: &[u32], n: usize) -> PosBool {
    family
        .iter()
        .map(|&s| {
            (0..2 * n)
                .filter(|i| s >> i & 1 == 1)
                .map(|i| if i < n { PosBool::State(i) } else { PosBool::Down(i - n) })
                .fold(PosBool::Top, PosBool::and)
        })
        .fold(PosBool::Bot, PosBool::or)
}

fn criterion3() -> Outcome {
    let mut checked = 0usize;
    for x in 1..=4u32 {
        let counters: Vec<Counter> = (1..1u64 << x).collect();
        for y in 0..1u64 << x {
            let f = Transfer::explicit(Instruction::ifz_map(y, &counters));
            if !check_distributive(&f, &counters).map_err(|e| e.to_string())? {
                return Err(format!("f_Y not distributive for |X| = {x}, Y = {y:#b}"));
            }
            checked += 1;
        }
    }
    for x in 1..=3usize {
        let counters: Vec<Counter> = (0..x).map(|i| 1u64 << i).collect();
        for code in 0u64..1 << (x * x) {
            let map: BTreeMap<Counter, Vec<Counter>> = (0..x)
                .map(|i| {
                    let bits = code >> (i * x);
                    let img = (0..x).filter(|j| bits >> j & 1 == 1).map(|j| counters[j]).collect();
                    (counters[i], img)
                })
                .collect();
            if !check_distributive(&Transfer::explicit(map), &counters).map_err(|e| e.to_string())? {
                return Err(format!("singleton map {code:#b} over |X| = {x} not distributive"));
            }
            checked += 1;
        }
    }
    let al = Alphabet::new(["a"]).unwrap();
    for n in 1..=2usize {
        let fams = antichains(2 * n);
        let total = fams.len().pow(n as u32);
        for idx in 0..total {
            let mut a = AlternatingAutomaton::with_numbered_states(al.clone(), n, 0).map_err(|e| e.to_string())?;
            let mut rest = idx;
            for q in 0..n {
                let phi = dnf(&fams[rest % fams.len()], n);
                rest /= fams.len();
                a.set_delta(q, 0, Flag::NotUp, phi).map_err(|e| e.to_string())?;
            }
            let m = ara_to_ipcant(&a).map_err(|e| e.to_string())?;
            let cs = m.counters();
            if !check_distributive(m.step3_transfer(0), &cs).map_err(|e| e.to_string())? {
                return Err(format!("step-3 map not distributive:\n{a}"));
            }
            if idx == 0 && !check_distributive(m.step6_transfer(), &cs).map_err(|e| e.to_string())? {
                return Err(format!("step-6 map not distributive for {n} states"));
            }
            checked += 1;
        }
    }
    let witness_counters = [0b01, 0b10, 0b11];
    let witness = Transfer::explicit(BTreeMap::from([
        (0b01, vec![0b01]),
        (0b10, vec![0b10]),
        (0b11, vec![]),
    ]));
    if check_distributive(&witness, &witness_counters).map_err(|e| e.to_string())? {
        return Err("non-distributive witness accepted".into());
    }
    Ok(format!("{checked} maps distributive, witness rejected"))
}

fn criterion4() -> Outcome {
    let m111 = compute_bound(1, 1, 1).m;
    let m211 = compute_bound(2, 1, 1).m;
    if m111 != BigUint::from(12u32) || m211 != BigUint::from(48u32) {
        return Err(format!("m(1,1,1) = {m111}, m(2,1,1) = {m211}"));
    }
    let mut rng = StdRng::seed_from_u64(4);
    for _ in 0..50 {
        let q: usize = rng.gen_range(1..=8);
        let x: usize = rng.gen_range(1..=4);
        let c: usize = rng.gen_range(1..(1 << x));
        let m = compute_bound(q, x, c).m;
        let k = 1u64 << (2 * x * x + x);
        let base = 3 * q as u64;
        let floor_log = 63 - base.leading_zeros() as u64;
        let holds = if m.bits() <= k * floor_log {
            true
        } else {
            m < BigUint::from(base).pow(u32::try_from(k).map_err(|_| "exponent overflow")?)
        };
        if !holds {
            return Err(format!("ceiling fails for (|Q|, |X|, |C|) = ({q}, {x}, {c})"));
        }
    }
    Ok("m = 12, m = 48, ceiling holds on 50 sets".into())
}

/// Counters over a basis of 3, at most 4 of them.
fn small_counters(rng: &mut StdRng) -> Vec<Counter> {
    let count = rng.gen_range(1..=4);
    gen::counters(rng, 3, count)
}

fn random_instruction(rng: &mut StdRng, cs: &[Counter]) -> Instruction {
    let c = cs[rng.gen_range(0..cs.len())];
    match rng.gen_range(0..4) {
        0 => Instruction::Inc(c),
        1 => Instruction::Dec(c),
        2 => Instruction::IfzCap(rng.gen_range(0..8)),
        _ => {
            let map = cs
                .iter()
                .map(|&d| (d, cs.iter().copied().filter(|_| rng.gen_bool(0.4)).collect()))
                .collect();
            Instruction::Transf(Transfer::explicit(map))
        }
    }
}

fn pick<T: Clone>(rng: &mut StdRng, set: &std::collections::BTreeSet<T>) -> Option<T> {
    if set.is_empty() {
        return None;
    }
    set.iter().nth(rng.gen_range(0..set.len())).cloned()
}

fn criterion5() -> Outcome {
    let mut rng = StdRng::seed_from_u64(5);
    let mut lazy_trials = 0;
    while lazy_trials < 10_000 {
        let cs = small_counters(&mut rng);
        let instr = random_instruction(&mut rng, &cs);
        let v = gen::valuation(&mut rng, &cs, 3);
        // An erroneous step: errors before, the instruction, errors after.
        let mut before = v.clone();
        for &c in &cs {
            before.add(c, rng.gen_range(0..=1));
        }
        let Some(mut after) = pick(&mut rng, &fire(&before, &instr)) else {
            continue;
        };
        for &c in &cs {
            after.add(c, rng.gen_range(0..=1));
        }
        let below = Valuation::from_pairs(v.iter().map(|(c, k)| (c, rng.gen_range(0..=k))));
        if !fire_lazy(&below, &instr).iter().any(|w| w.le(&after)) {
            return Err(format!("lazy step: {below:?} below {v:?} under {instr:?} misses {after:?}"));
        }
        lazy_trials += 1;
    }
    let mut sq_trials = 0;
    while sq_trials < 10_000 {
        let cs = small_counters(&mut rng);
        let f = gen::distributive_transfer(&mut rng, &cs);
        let v = gen::valuation(&mut rng, &cs, 3);
        // Move a subset of v's tokens down to subsets of their counters.
        let mut v_sqrt = Valuation::zero();
        for (d, k) in v.iter() {
            let subs: Vec<Counter> = cs.iter().copied().filter(|&c| c & !d == 0).collect();
            for _ in 0..rng.gen_range(0..=k) {
                v_sqrt.inc(subs[rng.gen_range(0..subs.len())]);
            }
        }
        if !sqsse(&v_sqrt, &v) {
            return Err(format!("generated pair not related: {v_sqrt:?} {v:?}"));
        }
        let instr = Instruction::Transf(f);
        let Some(next) = pick(&mut rng, &fire(&v, &instr)) else {
            continue;
        };
        if !fire(&v_sqrt, &instr).iter().any(|w| sqsse(w, &next)) {
            return Err(format!("⊑ not preserved: {v_sqrt:?} ⊑ {v:?} under {instr:?} to {next:?}"));
        }
        sq_trials += 1;
    }
    Ok(format!("{lazy_trials} lazy trials, {sq_trials} ⊑ trials"))
}

fn criterion6() -> Outcome {
    let mut rng = StdRng::seed_from_u64(6);
    let al = Alphabet::new(["a", "b"]).unwrap();
    let mut strings = 0;
    for _ in 0..20 {
        let n = rng.gen_range(1..=3);
        let a = gen::automaton(&mut rng, &al, n);
        let m = ara_to_ipcant(&a).map_err(|e| e.to_string())?;
        for len in 1..=4 {
            let classes = canonical_class_sequences(len, len);
            for s in all_strings(al.len(), len) {
                let mut expected = false;
                for cl in &classes {
                    let w = DataWord::canonicalize(s.clone(), cl).map_err(|e| e.to_string())?;
                    if run_exists(&a, &w).map_err(|e| e.to_string())? {
                        expected = true;
                        break;
                    }
                }
                let got = accepts_prefix(&m, &s, Semantics::Lazy, 64);
                if got != expected {
                    return Err(format!("string {s:?}: machine {got}, automaton {expected}\n{a}"));
                }
                strings += 1;
            }
        }
    }
    Ok(format!("{strings} strings agree over 20 automata"))
}

fn criterion7() -> Outcome {
    let mut automata: Vec<(String, AlternatingAutomaton)> = Vec::new();
    for name in ["acb.ara", "fresh.ara"] {
        automata.push((name.into(), parse_automaton(&corpus(name)).map_err(|e| e.to_string())?));
    }
    for name in ["example.ltl", "alternate.ltl"] {
        let f = parse_ltl_file(&corpus(name)).map_err(|e| e.to_string())?;
        automata.push((name.into(), ltl_to_ara(&f.formula, &f.alphabet).map_err(|e| e.to_string())?));
    }
    let abc = acb().alphabet().clone();
    automata.push(("top".into(), AlternatingAutomaton::universal(abc.clone())));
    automata.push(("bottom".into(), AlternatingAutomaton::empty(abc.clone())));
    for (name, a) in &automata {
        let r = inclusion_check(a, a, 10_000, 64).map_err(|e| e.to_string())?;
        if r.verdict != InclusionVerdict::Included {
            return Err(format!("{name} ⊆ {name}: {}", r.verdict));
        }
    }
    let r = inclusion_check(&AlternatingAutomaton::universal(abc), &acb(), 10_000, 64).map_err(|e| e.to_string())?;
    if r.verdict != InclusionVerdict::NotIncluded {
        return Err(format!("top ⊆ acb: {}", r.verdict));
    }
    let mut rng = StdRng::seed_from_u64(7);
    let al = Alphabet::new(["a", "b"]).unwrap();
    let mut most = 0;
    for _ in 0..20 {
        let phi = gen::sentence(&mut rng, &al, 4);
        let psi = gen::sentence(&mut rng, &al, 4);
        let lhs = Formula::and(phi.clone(), psi.clone());
        let r = refine(&lhs, &phi, &al, 10_000, 64).map_err(|e| e.to_string())?;
        if r.verdict != InclusionVerdict::Included {
            return Err(format!("{} → {}: {}", lhs.display(&al), phi.display(&al), r.verdict));
        }
        most = most.max(r.iterations);
    }
    Ok(format!(
        "{} self-inclusions, top ⊄ acb, 20 refinements (at most {most} iterations)",
        automata.len()
    ))
}

/// Continuations to append after a halted run `run` of `m`.
fn continuations(m: &TuringMachine, run: &DataWord, rng: &mut StdRng) -> Vec<DataWord> {
    let len = m.encoding_length();
    let start = encode_tm_run(m, 0).expect("one configuration");
    let last_start = run.len() - len;
    let mut repeat = run.clone();
    for i in last_start..run.len() {
        repeat.push(run.letter(i), run.class(i)).expect("letter in range");
    }
    let mut out = vec![run.concat_disjoint(&start), repeat];
    let k = m.formula_alphabet().len();
    for _ in 0..8 {
        let mut w = run.clone();
        for _ in 0..len {
            let class = rng.gen_range(0..=w.class_count());
            w.push(rng.gen_range(0..k), class).expect("letter in range");
        }
        out.push(w);
    }
    out
}

fn criterion8() -> Outcome {
    let bounce = parse_tm(&corpus("bounce.tm")).map_err(|e| e.to_string())?;
    if bounce.size() != 2 {
        return Err("bouncing machine should have size 2".into());
    }
    let phi = ltl_to_ara(&tm_to_formula(&bounce), &bounce.formula_alphabet()).map_err(|e| e.to_string())?;
    let w = encode_tm_run(&bounce, 2).map_err(|e| e.to_string())?;
    if let Some(p) = rejection_point(&phi, &w).map_err(|e| e.to_string())? {
        return Err(format!("bouncing run falsified at prefix length {p}"));
    }
    let mut rng = StdRng::seed_from_u64(8);
    let mut cases = 0;
    for name in ["right_walker.tm", "left_walker.tm"] {
        let m = parse_tm(&corpus(name)).map_err(|e| e.to_string())?;
        let phi = ltl_to_ara(&tm_to_formula(&m), &m.formula_alphabet()).map_err(|e| e.to_string())?;
        let mut steps = 0;
        while encode_tm_run(&m, steps + 1).is_ok() {
            steps += 1;
        }
        let run = encode_tm_run(&m, steps).map_err(|e| e.to_string())?;
        let limit = run.len() + m.encoding_length();
        for cont in continuations(&m, &run, &mut rng) {
            match rejection_point(&phi, &cont).map_err(|e| e.to_string())? {
                Some(p) if p <= limit => cases += 1,
                other => return Err(format!("{name}: rejection at {other:?}, expected ≤ {limit}")),
            }
        }
    }
    Ok(format!("{} bouncing prefixes undetermined, {cases} halting continuations falsified", w.len()))
}

fn criterion9() -> Outcome {
    let mut rng = StdRng::seed_from_u64(9);
    let al = Alphabet::new(["a", "b"]).unwrap();
    let mut yes = 0;
    for _ in 0..1000 {
        let n = rng.gen_range(1..=4);
        let a = gen::automaton(&mut rng, &al, n);
        let len = rng.gen_range(1..=6);
        let w = gen::word(&mut rng, &al, len, 3);
        let x = run_exists(&a, &w).map_err(|e| e.to_string())?;
        let y = oracle_run_exists(&a, &w).map_err(|e| e.to_string())?;
        if x != y {
            return Err(format!("{}: minimal {x}, oracle {y}\n{a}", w.display(&al)));
        }
        yes += usize::from(x);
    }
    Ok(format!("1000 pairs agree ({yes} with a run)"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        (1, 30, criterion1),
        (2, 1, criterion2),
        (3, 60, criterion3),
        (4, 1, criterion4),
        (5, 60, criterion5),
        (6, 300, criterion6),
        (7, 300, criterion7),
        (8, 60, criterion8),
        (9, 60, criterion9),
    ];
    let mut failed = 0;
    for (n, secs, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let limit = Duration::from_secs(secs);
        let line = match outcome {
            Ok(detail) if took < limit => format!("PASS {detail}"),
            Ok(detail) => format!("FAIL over the {secs} s limit: {detail}"),
            Err(why) => format!("FAIL {why}"),
        };
        if line.starts_with("FAIL") {
            failed += 1;
        }
        println!("criterion {n}: {line} [{:.2} s]", took.as_secs_f64());
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
