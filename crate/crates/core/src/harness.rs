//! The acceptance checks, runnable one by one or all together.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{
    compose_with_queue, control_of, queue_spec, queue_var, term_lts, CommAction, Payload, RecursiveSpec,
};
use crate::automaton::{QConfiguration, QTransition, QueueAutomaton};
use crate::bisim::naive::naive_relation;
use crate::bisim::{branching_bisim, inert_taus, partition_relation, random_lts, BisimVerdict, Mode};
use crate::compute::run_function;
use crate::corpus;
use crate::error::Result;
use crate::language::{accepted_words, accepts};
use crate::lts::{explore, explore_with_configs, ExplorationBound, FiniteLts, ProcessGraph};
use crate::symbol::{ActionLabel, Symbol, Trigger};
use crate::transform::{eliminate_any_triggers, merge_two_queues, normalize, qa_to_rtm, rtm_to_qa, PassReport};

pub struct Criterion {
    pub id: u8,
    pub name: &'static str,
    /// Words accepted by `--only`, besides the number.
    pub tags: &'static [&'static str],
    run: fn() -> Result<Check>,
}

/// What a criterion found, and the bounds it used.
pub struct Check {
    pub passed: bool,
    pub detail: String,
    pub settings: String,
}

pub struct Outcome {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub settings: String,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{verdict} {:>2} {}: {} [{}]", self.id, self.name, self.detail, self.settings)
    }
}

pub fn criteria() -> &'static [Criterion] {
    &CRITERIA
}

static CRITERIA: [Criterion; 13] = [
    Criterion { id: 1, name: "square words", tags: &["language"], run: square_words },
    Criterion { id: 2, name: "a^n b^n c^n", tags: &["language"], run: anbncn },
    Criterion { id: 3, name: "queues are FIFO", tags: &["language", "queue"], run: fifo },
    Criterion { id: 4, name: "any-trigger elimination", tags: &["transform", "bisim"], run: star_elimination },
    Criterion { id: 5, name: "normalization", tags: &["transform", "bisim"], run: normalization },
    Criterion { id: 6, name: "two-queue merge", tags: &["transform", "bisim"], run: two_queue_merge },
    Criterion {
        id: 7,
        name: "RTM and queue automaton translations",
        tags: &["transform", "bisim", "rtm"],
        run: rtm_translations,
    },
    Criterion { id: 8, name: "negative control", tags: &["bisim"], run: negative_control },
    Criterion { id: 9, name: "function computation", tags: &["compute"], run: function_computation },
    Criterion { id: 10, name: "recursive queue specification", tags: &["algebra", "bisim"], run: queue_specification },
    Criterion { id: 11, name: "control plus queue decomposition", tags: &["algebra", "bisim"], run: decomposition },
    Criterion { id: 12, name: "bisimulation engine self-check", tags: &["bisim"], run: engine_self_check },
    Criterion { id: 13, name: "unbounded a-runs", tags: &["language", "queue"], run: unbounded_runs },
];

pub fn run(c: &Criterion) -> Outcome {
    let (passed, detail, settings) = match (c.run)() {
        Ok(check) => (check.passed, check.detail, check.settings),
        Err(e) => (false, format!("error: {e}"), String::new()),
    };
    Outcome { id: c.id, name: c.name, passed, detail, settings }
}

/// Criteria whose number or one of whose tags equals `filter` (all if `None`).
pub fn select(filter: Option<&str>) -> Vec<&'static Criterion> {
    CRITERIA.iter().filter(|c| filter.is_none_or(|f| c.id.to_string() == f || c.tags.contains(&f))).collect()
}

pub fn run_all(filter: Option<&str>) -> Vec<Outcome> {
    select(filter).into_iter().map(run).collect()
}

fn check(passed: bool, detail: impl Into<String>, settings: impl Into<String>) -> Result<Check> {
    Ok(Check { passed, detail: detail.into(), settings: settings.into() })
}

fn words(alphabet: &[&str], max_len: usize) -> Vec<Vec<String>> {
    let mut all = vec![vec![]];
    let mut layer: Vec<Vec<String>> = vec![vec![]];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|w| alphabet.iter().map(move |a| [w.clone(), vec![a.to_string()]].concat()))
            .collect();
        all.extend(layer.iter().cloned());
    }
    all
}

fn square_words() -> Result<Check> {
    let qa = corpus::load_qa("fig1")?;
    let bound = ExplorationBound::depth(20).with_queue(6);
    let mut wrong = Vec::new();
    let all = words(&["a", "b"], 6);
    for w in &all {
        let square = w.len() % 2 == 0 && w[..w.len() / 2] == w[w.len() / 2..];
        if accepts(&qa, w, bound)?.is_accepted() != square {
            wrong.push(w.concat());
        }
    }
    check(
        wrong.is_empty(),
        format!("{} words checked, {} misclassified {:?}", all.len(), wrong.len(), wrong),
        "max_len=6 depth=20 max_queue=6",
    )
}

fn anbncn() -> Result<Check> {
    let qa = corpus::load_qa("fig2")?;
    let got = accepted_words(&qa, 9, ExplorationBound::depth(20).with_queue(9))?;
    let want: BTreeSet<Vec<String>> = (1..=3)
        .map(|n| ["a", "b", "c"].iter().flat_map(|x| std::iter::repeat_n(x.to_string(), n)).collect())
        .collect();
    let shown: Vec<String> = got.iter().map(|w| w.concat()).collect();
    check(got == want, format!("accepted {shown:?}"), "max_len=9 depth=20 max_queue=9")
}

/// Replaces the data alphabet `{from}` by `to`, copying every transition
/// that mentions `from` once per new symbol.
fn widen(qa: &QueueAutomaton, from: &Symbol, to: &[Symbol]) -> Result<QueueAutomaton> {
    let mut out = QueueAutomaton {
        data: to.iter().cloned().collect(),
        transitions: vec![],
        actions: BTreeSet::new(),
        ..qa.clone()
    };
    for t in &qa.transitions {
        let action = match &t.action {
            ActionLabel::Visible(tok) => Some(CommAction::parse(tok)?),
            ActionLabel::Tau => None,
        };
        let mentions = t.trigger.symbol() == Some(from)
            || t.enqueue.contains(from)
            || matches!(&action, Some(CommAction::Send(_, Payload::Data(d)) | CommAction::Receive(_, Payload::Data(d))) if d == from);
        let copies: Vec<&Symbol> = if mentions { to.iter().collect() } else { vec![from] };
        for x in copies {
            let sub = |d: &Symbol| if d == from { x.clone() } else { d.clone() };
            let label = match &action {
                Some(CommAction::Send(c, Payload::Data(d))) => ActionLabel::Visible(format!("{c}!{}", sub(d))),
                Some(CommAction::Receive(c, Payload::Data(d))) => ActionLabel::Visible(format!("{c}?{}", sub(d))),
                _ => t.action.clone(),
            };
            let trigger = match &t.trigger {
                Trigger::Head(d) => Trigger::Head(sub(d)),
                other => other.clone(),
            };
            if let ActionLabel::Visible(tok) = &label {
                out.actions.insert(tok.clone());
            }
            out.transitions.push(QTransition::new(&t.src, label, trigger, t.enqueue.iter().map(sub).collect(), &t.dst));
        }
    }
    out.validate().into_result()?;
    Ok(out)
}

/// Output words (τ and `o!eps` erased) producible after reading `input`,
/// following only input, τ and output steps, within `depth` steps.
fn dequeue_orders(qa: &QueueAutomaton, input: &[Symbol], depth: usize) -> Result<BTreeSet<Vec<Symbol>>> {
    let mut outs = BTreeSet::new();
    let mut seen: HashSet<(QConfiguration, usize, Vec<Symbol>)> = HashSet::new();
    let start = (qa.initial_configuration(), 0usize, Vec::new());
    let mut todo = VecDeque::from([(start.clone(), 0usize)]);
    seen.insert(start);
    while let Some(((cfg, read, out), d)) = todo.pop_front() {
        if read == input.len() {
            outs.insert(out.clone());
        }
        if d == depth {
            continue;
        }
        for (a, next) in qa.step(&cfg)? {
            let (mut r, mut o) = (read, out.clone());
            match CommAction::from_label(&a)? {
                CommAction::Receive(_, Payload::Data(x)) if read < input.len() && input[read] == x => r += 1,
                CommAction::Receive(..) => continue,
                CommAction::Send(_, Payload::Data(x)) if read == input.len() => o.push(x),
                CommAction::Send(_, Payload::EmptyProbe) | CommAction::Tau => {}
                _ => continue,
            }
            let node = (next, r, o);
            if seen.insert(node.clone()) {
                todo.push_back((node, d + 1));
            }
        }
    }
    Ok(outs)
}

fn maximal(words: &BTreeSet<Vec<Symbol>>) -> Vec<Vec<Symbol>> {
    words.iter().filter(|w| !words.iter().any(|v| v.len() > w.len() && v.starts_with(w))).cloned().collect()
}

fn fifo() -> Result<Check> {
    let d = Symbol::new("d")?;
    let de = [d.clone(), Symbol::new("e")?];
    let left = widen(&corpus::load_qa("fig3_left")?, &d, &de)?;
    let right = widen(&corpus::load_qa("fig3_right")?, &d, &de)?;
    let depth = 12;
    let mut bad = Vec::new();
    let mut n = 0;
    for u in words(&["d", "e"], 3) {
        let u: Vec<Symbol> = u.iter().map(Symbol::new).collect::<Result<_>>()?;
        for (name, qa) in [("left", &left), ("right", &right)] {
            n += 1;
            let m = maximal(&dequeue_orders(qa, &u, depth)?);
            if m != vec![u.clone()] {
                bad.push(format!("{name} {u:?} -> {m:?}"));
            }
        }
    }
    let (lts, configs) = explore_with_configs(&right, ExplorationBound::depth(depth))?;
    let nonempty_final = (0..lts.len()).filter(|&s| lts.finals[s] && !configs[s].queue.is_empty()).count();
    if nonempty_final > 0 {
        bad.push(format!("{nonempty_final} final configurations of the right queue hold data"));
    }
    check(
        bad.is_empty(),
        format!("{n} enqueue words checked; {}", if bad.is_empty() { "all FIFO".into() } else { bad.join("; ") }),
        format!("data={{d,e}} max_len=3 depth={depth}"),
    )
}

/// Related truncations, and every τ-edge leaving a fresh state inert.
fn pass_check<G: ProcessGraph, H: ProcessGraph>(
    source: &G,
    d1: usize,
    report: &PassReport<H>,
    d2: usize,
) -> Result<(BisimVerdict, usize, usize)>
where
    H::Config: HasState,
{
    let a = explore(source, ExplorationBound::depth(d1))?;
    let (b, configs) = explore_with_configs(&report.output, ExplorationBound::depth(d2))?;
    let verdict = branching_bisim(&a, &b);
    let fresh: HashSet<&str> = report.fresh_states.iter().map(String::as_str).collect();
    let added: Vec<(usize, usize)> = b
        .edges()
        .filter(|(s, l, _)| l.is_tau() && fresh.contains(configs[*s].state()))
        .map(|(s, _, t)| (s, t))
        .collect();
    let inert = inert_taus(&b);
    let not_inert = added.iter().filter(|e| !inert.contains(e)).count();
    Ok((verdict, added.len(), not_inert))
}

pub trait HasState {
    fn state(&self) -> &str;
}

impl HasState for QConfiguration {
    fn state(&self) -> &str {
        &self.state
    }
}

impl HasState for crate::rtm::RtmConfiguration {
    fn state(&self) -> &str {
        &self.state
    }
}

const FIVE: [&str; 5] = ["fig1", "fig2", "fig3_left", "fig5", "fig6"];

fn per_input(
    depth: usize,
    pass: fn(&QueueAutomaton) -> Result<PassReport<QueueAutomaton>>,
    shape: fn(&QueueAutomaton) -> bool,
) -> Result<(bool, String)> {
    let mut ok = true;
    let mut parts = Vec::new();
    for id in FIVE {
        let qa = corpus::load_qa(id)?;
        let report = pass(&qa)?;
        let (v, added, not_inert) = pass_check(&qa, depth, &report, depth)?;
        let good = v.is_related() && not_inert == 0 && shape(&report.output);
        ok &= good;
        let verdict =
            if v.is_related() { "related".to_string() } else { format!("distinguished:\n{}", v.witness().unwrap()) };
        parts.push(format!("{id} {verdict}, {added} added tau edges, {not_inert} not inert"));
    }
    Ok((ok, parts.join("; ")))
}

fn star_elimination() -> Result<Check> {
    let (ok, detail) = per_input(8, eliminate_any_triggers, |q| q.count_any_triggers() == 0)?;
    check(ok, detail, "depth=8 both sides")
}

fn normalization() -> Result<Check> {
    let (ok, detail) = per_input(10, normalize, QueueAutomaton::is_normalized)?;
    check(ok, detail, "depth=10 both sides, shape a[*/d] a[d/eps] a[eps/eps]")
}

fn two_queue_merge() -> Result<Check> {
    let src = corpus::load_qa2("shuttle")?;
    let report = merge_two_queues(&src)?;
    let a = explore(&src, ExplorationBound::depth(8))?;
    let b = explore(&report.output, ExplorationBound::depth(24))?;
    let v = branching_bisim(&a, &b);
    let detail = match v.witness() {
        None => "related".to_string(),
        Some(w) => format!("distinguished, witness touches frontier: {}\n{w}", w.touches_frontier),
    };
    check(v.is_related(), detail, "two-queue depth=8 merged depth=24")
}

fn rtm_translations() -> Result<Check> {
    let mut ok = true;
    let mut parts = Vec::new();
    let mut note = |name: String, v: BisimVerdict, ok: &mut bool| {
        *ok &= v.is_related();
        parts.push(format!(
            "{name} {}",
            if v.is_related() { "related".into() } else { format!("distinguished:\n{}", v.witness().unwrap()) }
        ));
    };
    for id in ["rtm_blank_loop", "rtm_writer"] {
        let m = corpus::load_rtm(id)?;
        let r = rtm_to_qa(&m)?;
        let (v, _, _) = pass_check(&m, 8, &r, 14)?;
        note(format!("{id} to qa"), v, &mut ok);
    }
    for id in ["fig2", "fig3_left"] {
        let qa = corpus::load_qa(id)?;
        let r = qa_to_rtm(&qa)?;
        let (v, _, _) = pass_check(&qa, 8, &r, 10)?;
        note(format!("{id} to rtm"), v, &mut ok);
        let back = rtm_to_qa(&r.output)?;
        let (v, _, _) = pass_check(&qa, 8, &back, 8)?;
        note(format!("{id} round trip"), v, &mut ok);
    }
    check(ok, parts.join("; "), "rtm depth=8 vs qa depth=14; qa depth=8 vs rtm depth=10; round trip depth=8 both sides")
}

fn negative_control() -> Result<Check> {
    let a = explore(&corpus::load_qa("fig1")?, ExplorationBound::depth(8))?;
    let b = explore(&corpus::load_qa("fig2")?, ExplorationBound::depth(8))?;
    let v = branching_bisim(&a, &b);
    match v.witness() {
        None => check(false, "related, expected distinguished", "depth=8"),
        Some(w) => check(
            !w.touches_frontier,
            format!("distinguished, witness touches frontier: {}\n{w}", w.touches_frontier),
            "depth=8",
        ),
    }
}

fn syms(w: &[String]) -> Result<Vec<Symbol>> {
    w.iter().map(Symbol::new).collect()
}

fn function_computation() -> Result<Check> {
    let budget = 1000;
    let mut bad = Vec::new();
    let fig5 = corpus::load_qa("fig5")?;
    let inputs5 = words(&["a", "b"], 3);
    for w in &inputs5 {
        let r = run_function(&fig5, &syms(w)?, budget)?;
        let want = syms(&[w.clone(), w.clone()].concat())?;
        if r.output != want || r.status != crate::compute::RunStatus::Completed {
            bad.push(format!("fig5 {w:?}: {:?} {:?}", r.output, r.status));
        }
    }
    let fig6 = corpus::load_qa("fig6")?;
    let mut pairs = 0;
    for n in 0..=3 {
        for x in words(&["0", "1"], n).into_iter().filter(|w| w.len() == n) {
            for y in words(&["0", "1"], n).into_iter().filter(|w| w.len() == n) {
                pairs += 1;
                let input = syms(&[x.clone(), vec![">".to_string()], y.clone()].concat())?;
                let r = run_function(&fig6, &input, budget)?;
                let want = if x > y { "yes" } else { "no" };
                let early_ok = match x.first() {
                    Some(x0) if Some(x0) != y.first() => r.output_positions.first() == Some(&(n + 2)),
                    _ => true,
                };
                if r.output != syms(&[want.to_string()])?
                    || !early_ok
                    || r.status != crate::compute::RunStatus::Completed
                {
                    bad.push(format!("fig6 {}>{}: {:?} at {:?}", x.concat(), y.concat(), r.output, r.output_positions));
                }
            }
        }
    }
    check(
        bad.is_empty(),
        format!(
            "{} doubling inputs, {pairs} comparator pairs; {}",
            inputs5.len(),
            if bad.is_empty() { "all correct".into() } else { bad.join("; ") }
        ),
        format!("budget={budget} steps"),
    )
}

fn queue_specification() -> Result<Check> {
    let d: BTreeSet<Symbol> = [Symbol::new("d")?].into();
    let spec: RecursiveSpec = queue_spec(&d)?;
    let a = term_lts(&crate::algebra::var(queue_var("i", "o")), &spec, ExplorationBound::depth(6))?;
    let b = explore(&corpus::load_qa("fig3_left")?, ExplorationBound::depth(6))?;
    let v = branching_bisim(&a, &b);
    let detail = match v.witness() {
        None => "related".to_string(),
        Some(w) => format!("distinguished, witness touches frontier: {}\n{w}", w.touches_frontier),
    };
    check(v.is_related(), detail, "data={d} depth=6 both sides")
}

fn decomposition() -> Result<Check> {
    let mut ok = true;
    let mut parts = Vec::new();
    let (depth, composite_depth) = (8, 40);
    for id in ["fig2", "fig3_left"] {
        let mut qa = corpus::load_qa(id)?;
        if !qa.is_normalized() {
            qa = normalize(&qa)?.output;
        }
        let control = control_of(&qa)?;
        let comp = compose_with_queue(&control, &qa.data)?;
        let (lts, configs) = explore_with_configs(&comp, ExplorationBound::depth(composite_depth))?;
        let q = explore(&qa, ExplorationBound::depth(depth))?;
        let v = branching_bisim(&q, &lts);
        let comm = comp.comm_tau_edges(&lts, &configs)?;
        let inert = inert_taus(&lts);
        let not_inert = comm.iter().filter(|e| !inert.contains(e)).count();
        ok &= v.is_related() && not_inert == 0;
        let verdict =
            if v.is_related() { "related".into() } else { format!("distinguished:\n{}", v.witness().unwrap()) };
        parts.push(format!("{id} {verdict}, {} communication tau edges, {not_inert} not inert", comm.len()));
    }
    check(ok, parts.join("; "), format!("automaton depth={depth} composite depth={composite_depth}"))
}

fn relation_mismatch(lts: &FiniteLts, mode: Mode) -> bool {
    partition_relation(lts, mode) != naive_relation(lts, mode)
}

fn engine_self_check() -> Result<Check> {
    let seed = 12;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut disagreements = BTreeMap::new();
    for i in 0..200 {
        let n = rng.gen_range(1..=20);
        let actions = rng.gen_range(1..=3);
        let lts = random_lts(&mut rng, n, actions, 0.3);
        for mode in [Mode::Strong, Mode::Branching] {
            if relation_mismatch(&lts, mode) {
                disagreements.insert(i, mode);
            }
        }
    }
    check(
        disagreements.is_empty(),
        if disagreements.is_empty() {
            "200 random LTSs, 0 disagreements".to_string()
        } else {
            format!("200 random LTSs, {} disagreements {:?}", disagreements.len(), disagreements)
        },
        format!("seed={seed} states<=20 actions<=3 tau_density=0.3"),
    )
}

fn unbounded_runs() -> Result<Check> {
    let qa = corpus::load_qa("fig7")?;
    let depth = 200;
    let mut counts = Vec::new();
    let mut ok = true;
    for k in 2..=6usize {
        let lts = explore(&qa, ExplorationBound::depth(depth).with_queue(k))?;
        let run: Vec<String> = vec!["a".to_string(); k];
        let longer: Vec<String> = vec!["a".to_string(); k + 1];
        let bound = ExplorationBound::depth(depth).with_queue(k);
        let max_ok = accepts(&qa, &run, bound)?.is_accepted() && !accepts(&qa, &longer, bound)?.is_accepted();
        ok &= max_ok && lts.len() >= k && lts.len() <= 4 * k + 4;
        counts.push(format!(
            "k={k}: {} configurations, longest accepted a-run {}",
            lts.len(),
            if max_ok { k.to_string() } else { "other".into() }
        ));
    }
    ok &= counts.windows(2).all(|w| w[0] != w[1]);
    check(ok, counts.join("; "), format!("depth={depth} max_queue=k"))
}
