use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use rustc_hash::FxHashMap;

use super::Cover;
use crate::discovery::IndependenceStatement;
use crate::relation::AttributeSet;

/// Inference rules for independence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    /// `⊢ X ⊥ ∅`
    TrivialIndependence,
    /// `X ⊥ Y ⊢ Y ⊥ X`
    Symmetry,
    /// `X ⊥ YZ ⊢ X ⊥ Y`
    Decomposition,
    /// `X ⊥ Y, XY ⊥ Z ⊢ X ⊥ YZ`
    Exchange,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rule::TrivialIndependence => "trivial independence",
            Rule::Symmetry => "symmetry",
            Rule::Decomposition => "decomposition",
            Rule::Exchange => "exchange",
        })
    }
}

/// A statement with a fixed orientation, as rules are written.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Oriented {
    pub left: AttributeSet,
    pub right: AttributeSet,
}

impl Oriented {
    pub fn new(left: AttributeSet, right: AttributeSet) -> Self {
        Oriented { left, right }
    }

    pub fn flipped(&self) -> Self {
        Oriented::new(self.right, self.left)
    }

    /// `None` for trivial (empty-sided) or overlapping pairs.
    pub fn statement(&self) -> Option<IndependenceStatement> {
        IndependenceStatement::new(self.left, self.right)
    }

    pub fn render(&self, names: &[String]) -> String {
        let side = |s: &AttributeSet| {
            let parts: Vec<&str> = s.iter().map(|p| names[p].as_str()).collect();
            format!("{{{}}}", parts.join(","))
        };
        format!("{} ⊥ {}", side(&self.left), side(&self.right))
    }
}

impl From<IndependenceStatement> for Oriented {
    fn from(s: IndependenceStatement) -> Self {
        Oriented::new(s.left(), s.right())
    }
}

/// One rule application.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivationStep {
    pub rule: Rule,
    pub premises: Vec<Oriented>,
    pub conclusion: Oriented,
}

impl DerivationStep {
    /// True iff `conclusion` follows from `premises` by exactly `rule`.
    pub fn is_valid(&self) -> bool {
        let c = &self.conclusion;
        match (self.rule, self.premises.as_slice()) {
            (Rule::TrivialIndependence, []) => c.right.is_empty(),
            (Rule::Symmetry, [p]) => *c == p.flipped(),
            (Rule::Decomposition, [p]) => p.left == c.left && c.right.is_subset(&p.right),
            (Rule::Exchange, [p, q]) => {
                q.left == p.left.union(&p.right) && c.left == p.left && c.right == p.right.union(&q.right)
            }
            _ => false,
        }
    }
}

/// Upper bound on distinct statements materialized by one saturation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SaturationBudget {
    pub max_derived: usize,
}

impl Default for SaturationBudget {
    fn default() -> Self {
        SaturationBudget { max_derived: 100_000 }
    }
}

#[derive(Debug, Clone, Copy)]
enum Origin {
    Given,
    /// Dropped one attribute from the premise.
    Decomposed { from: IndependenceStatement },
    /// `X ⊥ Y, XY ⊥ Z ⊢ X ⊥ YZ` with `x` naming the side X of `first`.
    Exchanged {
        first: IndependenceStatement,
        second: IndependenceStatement,
        x: AttributeSet,
    },
}

/// The closure of a statement set under the rules, with provenance.
#[derive(Debug, Clone)]
pub struct Saturation {
    origins: FxHashMap<IndependenceStatement, Origin>,
    /// False when the budget ran out before the fixpoint.
    pub complete: bool,
}

impl Saturation {
    pub fn contains(&self, s: &IndependenceStatement) -> bool {
        self.origins.contains_key(s)
    }

    pub fn len(&self) -> usize {
        self.origins.len()
    }

    pub fn is_empty(&self) -> bool {
        self.origins.is_empty()
    }

    pub fn statements(&self) -> BTreeSet<IndependenceStatement> {
        self.origins.keys().copied().collect()
    }

    /// A derivation of `s` from the given statements, premises first.
    pub fn derivation(&self, s: &IndependenceStatement) -> Option<Derivation> {
        if !self.contains(s) {
            return None;
        }
        let mut d = Derivation {
            premises: Vec::new(),
            steps: Vec::new(),
        };
        let mut done: FxHashMap<IndependenceStatement, Oriented> = FxHashMap::default();
        let conclusion = self.explain(*s, &mut done, &mut d);
        debug_assert_eq!(conclusion.statement(), Some(*s));
        Some(d)
    }

    fn explain(
        &self,
        s: IndependenceStatement,
        done: &mut FxHashMap<IndependenceStatement, Oriented>,
        d: &mut Derivation,
    ) -> Oriented {
        if let Some(o) = done.get(&s) {
            return *o;
        }
        let out = match self.origins[&s] {
            Origin::Given => {
                d.premises.push(s);
                Oriented::from(s)
            }
            Origin::Decomposed { from } => {
                let mut p = self.explain(from, done, d);
                // Orient so that the shrinking side is on the right.
                let keep_left = s.left() == p.left || s.right() == p.left;
                if !keep_left {
                    p = d.push(Rule::Symmetry, vec![p], p.flipped());
                }
                let shrunk = if s.left() == p.left { s.right() } else { s.left() };
                d.push(Rule::Decomposition, vec![p], Oriented::new(p.left, shrunk))
            }
            Origin::Exchanged { first, second, x } => {
                let mut p = self.explain(first, done, d);
                if p.left != x {
                    p = d.push(Rule::Symmetry, vec![p], p.flipped());
                }
                let mut q = self.explain(second, done, d);
                if q.left != first.attributes() {
                    q = d.push(Rule::Symmetry, vec![q], q.flipped());
                }
                let c = Oriented::new(p.left, p.right.union(&q.right));
                d.push(Rule::Exchange, vec![p, q], c)
            }
        };
        done.insert(s, out);
        out
    }
}

/// Premises used and the rule applications in order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Derivation {
    pub premises: Vec<IndependenceStatement>,
    pub steps: Vec<DerivationStep>,
}

impl Derivation {
    fn push(&mut self, rule: Rule, premises: Vec<Oriented>, conclusion: Oriented) -> Oriented {
        self.steps.push(DerivationStep {
            rule,
            premises,
            conclusion,
        });
        conclusion
    }

    /// True iff every step is a valid rule instance whose premises are
    /// given statements or earlier conclusions.
    pub fn is_valid(&self) -> bool {
        let mut known: BTreeSet<(AttributeSet, AttributeSet)> =
            self.premises.iter().map(|s| (s.left(), s.right())).collect();
        for step in &self.steps {
            let available = step.premises.iter().all(|p| known.contains(&(p.left, p.right)));
            if !step.is_valid() || !available {
                return false;
            }
            known.insert((step.conclusion.left, step.conclusion.right));
        }
        true
    }
}

struct Saturator {
    origins: FxHashMap<IndependenceStatement, Origin>,
    queue: VecDeque<IndependenceStatement>,
    /// Processed statements by their attribute union.
    by_union: FxHashMap<AttributeSet, Vec<IndependenceStatement>>,
    /// For each side of a processed statement, the opposite sides.
    partners: FxHashMap<AttributeSet, Vec<AttributeSet>>,
    budget: SaturationBudget,
    target: Option<IndependenceStatement>,
    exhausted: bool,
}

impl Saturator {
    fn add(&mut self, s: IndependenceStatement, origin: Origin) {
        if self.exhausted || self.origins.contains_key(&s) {
            return;
        }
        if self.origins.len() >= self.budget.max_derived {
            self.exhausted = true;
            return;
        }
        self.origins.insert(s, origin);
        self.queue.push_back(s);
    }

    fn found_target(&self) -> bool {
        self.target.is_some_and(|t| self.origins.contains_key(&t))
    }

    fn run(&mut self) {
        while let Some(s) = self.queue.pop_front() {
            if self.exhausted || self.found_target() {
                return;
            }
            let (l, r, u) = (s.left(), s.right(), s.attributes());
            self.by_union.entry(u).or_default().push(s);
            self.partners.entry(l).or_default().push(r);
            self.partners.entry(r).or_default().push(l);

            for p in s.predecessors().collect::<Vec<_>>() {
                self.add(p, Origin::Decomposed { from: s });
            }

            // `s` as the first premise: some processed statement has side `u`.
            let zs = self.partners.get(&u).cloned().unwrap_or_default();
            for z in zs {
                let second = IndependenceStatement::new(u, z).expect("processed statements are disjoint");
                self.exchange(s, second, z);
            }
            // `s` as the second premise: each side may be the union of a first one.
            for (side, z) in [(l, r), (r, l)] {
                let firsts = self.by_union.get(&side).cloned().unwrap_or_default();
                for first in firsts {
                    self.exchange(first, s, z);
                }
            }
        }
    }

    fn exchange(&mut self, first: IndependenceStatement, second: IndependenceStatement, z: AttributeSet) {
        for (x, y) in [(first.left(), first.right()), (first.right(), first.left())] {
            if let Some(c) = IndependenceStatement::new(x, y.union(&z)) {
                self.add(c, Origin::Exchanged { first, second, x });
            }
        }
    }
}

fn saturate_until(
    sigma: &[IndependenceStatement],
    budget: SaturationBudget,
    target: Option<IndependenceStatement>,
) -> Saturation {
    let mut s = Saturator {
        origins: FxHashMap::default(),
        queue: VecDeque::new(),
        by_union: FxHashMap::default(),
        partners: FxHashMap::default(),
        budget,
        target,
        exhausted: false,
    };
    let mut sorted: Vec<_> = sigma.to_vec();
    sorted.sort_unstable();
    for st in sorted {
        s.add(st, Origin::Given);
    }
    s.run();
    Saturation {
        complete: !s.exhausted && s.queue.is_empty(),
        origins: s.origins,
    }
}

/// Closure of `sigma` under symmetry, decomposition and exchange. Symmetric
/// twins are the same canonical statement and trivial statements are left
/// implicit.
pub fn saturate(sigma: &[IndependenceStatement], budget: SaturationBudget) -> Saturation {
    saturate_until(sigma, budget, None)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Implication {
    Yes(Derivation),
    /// `incomplete` means the budget ran out, so this is not a refutation.
    No { incomplete: bool },
}

impl Implication {
    pub fn is_yes(&self) -> bool {
        matches!(self, Implication::Yes(_))
    }
}

/// Whether `sigma` derives `phi`.
pub fn implies(sigma: &[IndependenceStatement], phi: &IndependenceStatement, budget: SaturationBudget) -> Implication {
    let sat = saturate_until(sigma, budget, Some(*phi));
    match sat.derivation(phi) {
        Some(d) => Implication::Yes(d),
        None => Implication::No {
            incomplete: !sat.complete,
        },
    }
}

/// [`implies`] for a possibly trivial pair of sides.
pub fn implies_sides(
    sigma: &[IndependenceStatement],
    x: &AttributeSet,
    y: &AttributeSet,
    budget: SaturationBudget,
) -> Implication {
    if x.is_empty() || y.is_empty() {
        let mut d = Derivation {
            premises: Vec::new(),
            steps: Vec::new(),
        };
        let nonempty = x.union(y);
        let c = d.push(Rule::TrivialIndependence, Vec::new(), Oriented::new(nonempty, AttributeSet::empty()));
        if !x.is_empty() || y.is_empty() {
            return Implication::Yes(d);
        }
        d.push(Rule::Symmetry, vec![c], c.flipped());
        return Implication::Yes(d);
    }
    match IndependenceStatement::new(*x, *y) {
        Some(phi) => implies(sigma, &phi, budget),
        None => Implication::No { incomplete: false },
    }
}

/// A reduced cover with the removed members and their derivations.
#[derive(Debug, Clone)]
pub struct Reduction {
    pub cover: Cover,
    pub removed: Vec<(IndependenceStatement, Derivation)>,
    /// Some implication check ran out of budget.
    pub incomplete: bool,
}

/// Greedily drops members derivable from the remaining ones, trying larger
/// arities first and canonical order within an arity. One pass reaches the
/// fixpoint since shrinking the premise set never makes a kept member
/// derivable.
pub fn reduce_redundant(cover: &Cover, budget: SaturationBudget) -> Reduction {
    let mut order: Vec<IndependenceStatement> = cover.iter().copied().collect();
    order.sort_by(|a, b| b.arity().cmp(&a.arity()).then_with(|| a.cmp(b)));
    let mut current: BTreeSet<IndependenceStatement> = cover.members().clone();
    let mut removed = Vec::new();
    let mut incomplete = false;
    for phi in order {
        let rest: Vec<_> = current.iter().copied().filter(|s| *s != phi).collect();
        match implies(&rest, &phi, budget) {
            Implication::Yes(d) => {
                current.remove(&phi);
                removed.push((phi, d));
            }
            Implication::No { incomplete: i } => incomplete |= i,
        }
    }
    Reduction {
        cover: current.into_iter().collect(),
        removed,
        incomplete,
    }
}

/// Numbered textual proof of one derivation.
pub fn render_trace(d: &Derivation, names: &[String]) -> Vec<String> {
    let mut lines = Vec::new();
    for p in &d.premises {
        lines.push(format!("{}  [premise]", p.render(names)));
    }
    for step in &d.steps {
        lines.push(format!("{}  [{}]", step.conclusion.render(names), step.rule));
    }
    lines
}

#[cfg(test)]
mod tests {
    use super::*;

    fn st(x: &[usize], y: &[usize]) -> IndependenceStatement {
        IndependenceStatement::new(x.iter().copied().collect(), y.iter().copied().collect()).unwrap()
    }

    fn nursery_four() -> Vec<IndependenceStatement> {
        // Attributes 1..8 at positions 1..8.
        vec![
            st(&[1, 5, 6, 7], &[2, 3, 4, 8]),
            st(&[1, 5, 6, 8], &[2, 3, 4, 7]),
            st(&[1, 5, 7, 8], &[2, 3, 4, 6]),
            st(&[1, 6, 7, 8], &[2, 3, 4, 5]),
        ]
    }

    #[test]
    fn symmetric_twin_is_the_same_statement() {
        let s = st(&[2], &[0, 1]);
        let sat = saturate(&[s], SaturationBudget::default());
        let twin = IndependenceStatement::new([0, 1].into_iter().collect(), AttributeSet::singleton(2)).unwrap();
        assert!(sat.contains(&twin));
        assert!(sat.complete);
    }

    #[test]
    fn nursery_redundancy_is_derived() {
        let phi = st(&[1], &[2, 3, 4, 5, 6, 7, 8]);
        let sat = saturate(&nursery_four(), SaturationBudget::default());
        assert!(sat.complete);
        assert!(sat.contains(&phi));
        match implies(&nursery_four(), &phi, SaturationBudget::default()) {
            Implication::Yes(d) => {
                assert!(d.is_valid());
                assert!(d.steps.iter().any(|s| s.rule == Rule::Exchange));
                assert!(d.steps.iter().all(|s| s.rule != Rule::TrivialIndependence));
            }
            other => panic!("expected a derivation, got {other:?}"),
        }

        let mut cover: Cover = nursery_four().into_iter().collect();
        cover.insert(phi);
        assert_eq!(cover.len(), 5);
        let reduced = reduce_redundant(&cover, SaturationBudget::default());
        assert!(!reduced.cover.contains(&phi));
        assert!(reduced.removed.iter().any(|(s, _)| *s == phi));
    }

    #[test]
    fn trivial_and_non_implications() {
        let x: AttributeSet = [0].into_iter().collect();
        match implies_sides(&[], &x, &AttributeSet::empty(), SaturationBudget::default()) {
            Implication::Yes(d) => {
                assert!(d.is_valid());
                assert_eq!(d.steps[0].rule, Rule::TrivialIndependence);
            }
            other => panic!("{other:?}"),
        }
        let r = implies(&[st(&[0], &[1])], &st(&[0], &[2]), SaturationBudget::default());
        assert_eq!(r, Implication::No { incomplete: false });
    }

    #[test]
    fn budget_exhaustion_is_flagged() {
        let sat = saturate(&nursery_four(), SaturationBudget { max_derived: 10 });
        assert!(!sat.complete);
        assert_eq!(sat.len(), 10);
        let r = implies(
            &nursery_four(),
            &st(&[1], &[2, 3, 4, 5, 6, 7, 8]),
            SaturationBudget { max_derived: 5 },
        );
        assert_eq!(r, Implication::No { incomplete: true });
    }

    #[test]
    fn single_member_cover_is_unchanged() {
        let c: Cover = [st(&[0], &[1, 2])].into_iter().collect();
        let r = reduce_redundant(&c, SaturationBudget::default());
        assert_eq!(r.cover, c);
        assert!(r.removed.is_empty());
    }

    #[test]
    fn saturation_is_idempotent_and_monotone() {
        let sigma = vec![st(&[0], &[1]), st(&[0, 1], &[2]), st(&[3], &[4])];
        let once = saturate(&sigma, SaturationBudget::default());
        let again = saturate(&once.statements().into_iter().collect::<Vec<_>>(), SaturationBudget::default());
        assert_eq!(once.statements(), again.statements());
        let less = saturate(&sigma[..2], SaturationBudget::default());
        assert!(less.statements().is_subset(&once.statements()));
        // {0} ⊥ {1}, {0,1} ⊥ {2} ⊢ {0} ⊥ {1,2}
        assert!(once.contains(&st(&[0], &[1, 2])));
    }

    #[test]
    fn step_validity_checks_the_rule_schema() {
        let a = AttributeSet::singleton;
        let ab: AttributeSet = [0, 1].into_iter().collect();
        let good = DerivationStep {
            rule: Rule::Exchange,
            premises: vec![Oriented::new(a(0), a(1)), Oriented::new(ab, a(2))],
            conclusion: Oriented::new(a(0), [1, 2].into_iter().collect()),
        };
        assert!(good.is_valid());
        let bad = DerivationStep {
            rule: Rule::Decomposition,
            premises: vec![Oriented::new(a(0), ab)],
            conclusion: Oriented::new(a(1), a(0)),
        };
        assert!(!bad.is_valid());
    }
}
