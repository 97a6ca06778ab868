//! Reference implementations for the test suites. Deliberately naive: dense
//! adjacency matrices, edge-by-edge payoff sums in exact arithmetic, and
//! triple enumeration for clustering.

#![allow(dead_code)]

use std::collections::HashSet;

use num_rational::Rational64;
use rand::Rng;
use sfcoop::engine::is_homogeneous;
use sfcoop::mechanisms::{decide, select_combo, select_lc, select_ni, select_pop};
use sfcoop::sim::run_from;
use sfcoop::{Graph, Mechanism, MechanismSpec, NeighbourThreshold, PayoffParams, PopulationState, SimConfig, Strategy};

pub type Q = Rational64;

pub fn q(num: i64, den: i64) -> Q {
    Q::new(num, den)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RefMechanism {
    None,
    /// Invest in every cooperator when `100 * x_C <= p * n`.
    Pop(Q),
    /// Invest in cooperators with `degree >= c * max_degree`.
    Ni(Q),
    /// Invest in cooperators whose cooperative-neighbour fraction is `< t`.
    LcFraction(Q),
    /// Invest in cooperators with fewer than `t` cooperative neighbours.
    LcCount(Q),
    /// Ni(c) and LcFraction(t) together.
    Combo(Q, Q),
}

pub struct RefRun {
    /// Cooperator count of states `0..=generations`.
    pub counts: Vec<usize>,
    /// Invested cooperators on each of states `0..generations`.
    pub invested: Vec<usize>,
    pub total_cost: Q,
}

pub struct Dense {
    pub n: usize,
    pub adj: Vec<Vec<bool>>,
}

impl Dense {
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut adj = vec![vec![false; n]; n];
        for &(i, j) in edges {
            adj[i][j] = true;
            adj[j][i] = true;
        }
        Dense { n, adj }
    }

    pub fn from_graph(g: &Graph) -> Self {
        let edges: Vec<(usize, usize)> = g.edges().collect();
        Dense::new(g.node_count(), &edges)
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adj[i].iter().filter(|&&a| a).count()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|i| self.degree(i)).max().unwrap_or(0)
    }

    fn c_neighbours(&self, s: &[Strategy], i: usize) -> usize {
        (0..self.n).filter(|&j| self.adj[i][j] && s[j] == Strategy::Cooperate).count()
    }

    /// Which nodes the mechanism invests in on state `s`.
    pub fn selection(&self, s: &[Strategy], mech: RefMechanism) -> Vec<bool> {
        let n = self.n;
        let xc = s.iter().filter(|&&x| x == Strategy::Cooperate).count();
        if xc == 0 || xc == n {
            return vec![false; n];
        }
        let maxd = self.max_degree() as i64;
        // Relative degree is taken as 0 on an edgeless graph.
        let ni = |i: usize, c: Q| {
            if maxd == 0 {
                c <= Q::from(0)
            } else {
                Q::from(self.degree(i) as i64) >= c * Q::from(maxd)
            }
        };
        let lc = |i: usize, t: Q| {
            let d = self.degree(i) as i64;
            d > 0 && Q::from(self.c_neighbours(s, i) as i64) < t * Q::from(d)
        };
        (0..n)
            .map(|i| {
                s[i] == Strategy::Cooperate
                    && match mech {
                        RefMechanism::None => false,
                        RefMechanism::Pop(p) => Q::from(100 * xc as i64) <= p * Q::from(n as i64),
                        RefMechanism::Ni(c) => ni(i, c),
                        RefMechanism::LcFraction(t) => lc(i, t),
                        RefMechanism::LcCount(t) => Q::from(self.c_neighbours(s, i) as i64) < t,
                        RefMechanism::Combo(c, t) => ni(i, c) && lc(i, t),
                    }
            })
            .collect()
    }

    pub fn payoffs(&self, s: &[Strategy], b: Q, self_interaction: bool) -> Vec<Q> {
        let matrix = |me: Strategy, other: Strategy| match (me, other) {
            (Strategy::Cooperate, Strategy::Cooperate) => Q::from(1),
            (Strategy::Defect, Strategy::Cooperate) => b,
            _ => Q::from(0),
        };
        let mut score = vec![Q::from(0); self.n];
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                if self.adj[i][j] {
                    score[i] += matrix(s[i], s[j]);
                    score[j] += matrix(s[j], s[i]);
                }
            }
            if self_interaction {
                score[i] += matrix(s[i], s[i]);
            }
        }
        score
    }

    /// Every node copies the highest scorer among itself and its
    /// neighbours; the node keeps its strategy on a tie with itself and
    /// otherwise the lowest-id tied neighbour wins.
    pub fn imitate(&self, s: &[Strategy], score: &[Q]) -> Vec<Strategy> {
        (0..self.n)
            .map(|i| {
                let best = (0..self.n).filter(|&j| self.adj[i][j]).map(|j| score[j]).fold(score[i], Q::max);
                if score[i] == best {
                    s[i]
                } else {
                    let j = (0..self.n).find(|&j| self.adj[i][j] && score[j] == best).unwrap();
                    s[j]
                }
            })
            .collect()
    }

    pub fn run(
        &self,
        initial: &[Strategy],
        b: Q,
        self_interaction: bool,
        mech: RefMechanism,
        theta: Q,
        generations: usize,
    ) -> RefRun {
        let count = |s: &[Strategy]| s.iter().filter(|&&x| x == Strategy::Cooperate).count();
        let mut s = initial.to_vec();
        let mut counts = vec![count(&s)];
        let mut invested = Vec::new();
        let mut total_cost = Q::from(0);
        for _ in 0..generations {
            let mut score = self.payoffs(&s, b, self_interaction);
            let chosen = self.selection(&s, mech);
            let k = chosen.iter().filter(|&&c| c).count();
            for i in 0..self.n {
                if chosen[i] {
                    score[i] += theta;
                    total_cost += theta;
                }
            }
            invested.push(k);
            s = self.imitate(&s, &score);
            counts.push(count(&s));
        }
        RefRun { counts, invested, total_cost }
    }
}

/// Triangles and connected triples by enumerating every wedge `j - i - k`
/// and looking the closing edge up in a hash set.
pub fn wedge_census(g: &Graph) -> (u64, u64) {
    let edges: HashSet<(usize, usize)> = g.edges().collect();
    let closed = |a: u32, b: u32| edges.contains(&(a.min(b) as usize, a.max(b) as usize));
    let (mut wedges, mut closed_wedges) = (0u64, 0u64);
    for i in 0..g.node_count() {
        let nb = g.neighbours(i);
        for x in 0..nb.len() {
            for y in (x + 1)..nb.len() {
                wedges += 1;
                if closed(nb[x], nb[y]) {
                    closed_wedges += 1;
                }
            }
        }
    }
    (closed_wedges / 3, wedges)
}

/// Transitivity from [`wedge_census`].
pub fn reference_transitivity(g: &Graph) -> f64 {
    let (triangles, wedges) = wedge_census(g);
    if wedges == 0 {
        0.0
    } else {
        3.0 * triangles as f64 / wedges as f64
    }
}

/// Triangles by checking every node triple; only for small graphs.
pub fn triple_triangles(d: &Dense) -> u64 {
    let mut t = 0;
    for i in 0..d.n {
        for j in (i + 1)..d.n {
            for k in (j + 1)..d.n {
                if d.adj[i][j] && d.adj[j][k] && d.adj[i][k] {
                    t += 1;
                }
            }
        }
    }
    t
}

/// A random simple graph on `n` nodes with edge probability `p`.
pub fn random_graph<R: Rng>(rng: &mut R, n: usize, p: f64) -> Graph {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.random_bool(p) {
                edges.push((i, j));
            }
        }
    }
    Graph::from_edges(n, &edges).expect("simple graph")
}

pub fn random_strategies<R: Rng>(rng: &mut R, n: usize) -> Vec<Strategy> {
    (0..n).map(|_| if rng.random_bool(0.5) { Strategy::Cooperate } else { Strategy::Defect }).collect()
}

/// Every strategy profile on `n` nodes.
pub fn all_profiles(n: usize) -> impl Iterator<Item = Vec<Strategy>> {
    (0u32..(1 << n)).map(move |bits| {
        (0..n).map(|i| if bits >> i & 1 == 1 { Strategy::Cooperate } else { Strategy::Defect }).collect()
    })
}

/// Random rational in `[0, hi]` with denominator `den`.
pub fn random_q<R: Rng>(rng: &mut R, hi: i64, den: i64) -> Q {
    q(rng.random_range(0..=hi * den), den)
}

/// Library spec for a reference mechanism.
pub fn to_spec(mech: RefMechanism, theta: Q) -> MechanismSpec<Q> {
    match mech {
        RefMechanism::None => MechanismSpec::none(),
        RefMechanism::Pop(p) => MechanismSpec::pop(p, theta),
        RefMechanism::Ni(c) => MechanismSpec::node_influence(c, theta),
        RefMechanism::LcFraction(t) => MechanismSpec::local_cooperation(t, theta),
        RefMechanism::LcCount(t) => MechanismSpec {
            mechanism: Mechanism::LocalCooperation { threshold: t, mode: NeighbourThreshold::Count },
            theta,
        },
        RefMechanism::Combo(c, t) => MechanismSpec::influence_and_local(c, t, theta),
    }
}

#[derive(Clone, Debug)]
pub struct OracleCase {
    pub graph: Graph,
    pub initial: Vec<Strategy>,
    pub b: Q,
    pub self_interaction: bool,
    pub mechanism: RefMechanism,
    pub theta: Q,
}

/// A multiple of `1 / den` in `[0, hi]` half the time, otherwise a
/// multiple of `1 / 7`.
fn near_boundary<R: Rng>(rng: &mut R, den: i64, hi: i64) -> Q {
    if rng.random_bool(0.5) {
        q(rng.random_range(0..=den * hi), den)
    } else {
        random_q(rng, hi, 7)
    }
}

/// A random case on at most `max_n` nodes. Thresholds land exactly on a
/// decision boundary about half the time.
pub fn random_case<R: Rng>(rng: &mut R, max_n: usize) -> OracleCase {
    let n = rng.random_range(1..=max_n);
    let density = rng.random_range(0.0..1.0);
    let graph = random_graph(rng, n, density);
    let initial = random_strategies(rng, n);
    let maxd = graph.max_degree().max(1) as i64;
    let local_den = rng.random_range(1..=maxd);
    let mechanism = match rng.random_range(0..6) {
        0 => RefMechanism::None,
        1 => RefMechanism::Pop(if rng.random_bool(0.5) {
            q(100 * rng.random_range(0..=n as i64), n as i64)
        } else {
            random_q(rng, 100, 7)
        }),
        2 => RefMechanism::Ni(near_boundary(rng, maxd, 1)),
        3 => RefMechanism::LcFraction(near_boundary(rng, local_den, 1)),
        4 => RefMechanism::LcCount(near_boundary(rng, 2, 12)),
        _ => RefMechanism::Combo(near_boundary(rng, maxd, 1), near_boundary(rng, local_den, 1)),
    };
    OracleCase {
        graph,
        initial,
        b: q(rng.random_range(6..=10), 5),
        self_interaction: rng.random_bool(0.5),
        mechanism,
        theta: q(rng.random_range(1..=20), 4),
    }
}

/// Runs the library in exact arithmetic and the reference implementation on
/// the same case and compares everything they report.
pub fn check_oracle_case(case: &OracleCase, generations: usize) -> Result<(), String> {
    let n = case.graph.node_count();
    let theta = if case.mechanism == RefMechanism::None { Q::from(0) } else { case.theta };
    let payoff = PayoffParams::new(case.b).map_err(|e| e.to_string())?.with_self_interaction(case.self_interaction);
    let window = generations.div_ceil(2);
    let cfg = SimConfig::new(payoff, to_spec(case.mechanism, theta), 0).with_generations(generations, window);
    let got = run_from(&case.graph, &cfg, PopulationState::new(case.initial.clone())).map_err(|e| e.to_string())?;
    let want = Dense::from_graph(&case.graph).run(
        &case.initial,
        case.b,
        case.self_interaction,
        case.mechanism,
        theta,
        generations,
    );

    let fail = |what: &str| Err(format!("{what} differs on {case:?}"));
    if got.cooperator_counts != want.counts {
        return fail("cooperator trajectory");
    }
    if got.per_generation_investments != want.invested {
        return fail("investment counts");
    }
    if got.total_cost != want.total_cost {
        return fail("total cost");
    }
    let per_gen: Vec<Q> = want.invested.iter().map(|&k| Q::from(k as i64) * theta).collect();
    if got.per_generation_cost != per_gen {
        return fail("per-generation cost");
    }
    let fractions: Vec<f64> = want.counts.iter().map(|&c| c as f64 / n as f64).collect();
    if got.coop_trajectory != fractions {
        return fail("cooperation fractions");
    }
    let tail: usize = want.counts[want.counts.len() - window..].iter().sum();
    if got.tail_coop != tail as f64 / (window * n) as f64 {
        return fail("tail cooperation");
    }
    Ok(())
}

/// Thresholds `k / d` for every `d <= max_den`, plus both ends, ascending.
pub fn boundary_grid(max_den: i64) -> Vec<Q> {
    let mut v: Vec<Q> = (1..=max_den).flat_map(|d| (0..=d).map(move |k| q(k, d))).collect();
    v.sort();
    v.dedup();
    v
}

fn subset(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|x| b.contains(x))
}

/// Checks, for every strategy profile on `g`:
/// combo = NI ∩ LC, NI antitone in `c`, LC monotone in `t` (both modes),
/// and every selection (including via `decide`) contains only cooperators.
/// Returns the number of profiles checked.
pub fn check_mechanism_algebra(g: &Graph, grid: &[Q]) -> Result<usize, String> {
    let n = g.node_count();
    let counts: Vec<Q> = (0..=n).map(|k| q(k as i64, 2)).collect();
    let percents: Vec<Q> = (0..=2 * n).map(|k| q(100 * k as i64, 2 * n as i64)).collect();
    let mut profiles = 0;
    for profile in all_profiles(n) {
        let state = PopulationState::new(profile);
        let coops: Vec<usize> = state.cooperators().collect();
        let ctx =
            |what: String| format!("{what} on graph {:?}, state {}", g.edges().collect::<Vec<_>>(), state.symbols());

        let ni: Vec<Vec<usize>> = grid.iter().map(|&c| select_ni(g, &state, c)).collect();
        let lc: Vec<Vec<usize>> = grid.iter().map(|&t| select_lc(g, &state, t, NeighbourThreshold::Fraction)).collect();
        let lc_count: Vec<Vec<usize>> =
            counts.iter().map(|&t| select_lc(g, &state, t, NeighbourThreshold::Count)).collect();
        let pop: Vec<Vec<usize>> = percents.iter().map(|&p| select_pop(&state, p)).collect();

        for sel in ni.iter().chain(&lc).chain(&lc_count).chain(&pop) {
            if !subset(sel, &coops) {
                return Err(ctx(format!("selection {sel:?} includes a defector")));
            }
        }
        for w in ni.windows(2) {
            if !subset(&w[1], &w[0]) {
                return Err(ctx("NI is not antitone".into()));
            }
        }
        for w in lc.windows(2).chain(lc_count.windows(2)) {
            if !subset(&w[0], &w[1]) {
                return Err(ctx("LC is not monotone".into()));
            }
        }
        for (ci, &c) in grid.iter().enumerate() {
            for (ti, &t) in grid.iter().enumerate() {
                let combo = select_combo(g, &state, c, t, NeighbourThreshold::Fraction);
                let meet: Vec<usize> = ni[ci].iter().copied().filter(|i| lc[ti].contains(i)).collect();
                if combo != meet {
                    return Err(ctx(format!("combo({c}, {t}) = {combo:?} but NI ∩ LC = {meet:?}")));
                }
            }
        }
        let homogeneous = is_homogeneous(&state).is_some();
        let theta = Q::from(1);
        let via_decide = [
            (MechanismSpec::node_influence(grid[grid.len() / 2], theta), &ni[grid.len() / 2]),
            (MechanismSpec::local_cooperation(grid[grid.len() / 2], theta), &lc[grid.len() / 2]),
        ];
        for (spec, direct) in via_decide {
            let d = decide(g, &state, &spec);
            let expected: &[usize] = if homogeneous { &[] } else { direct };
            if d.invested != expected || d.generation_cost != Q::from(d.invested.len() as i64) * theta {
                return Err(ctx(format!("decide disagrees for {spec:?}")));
            }
        }
        profiles += 1;
    }
    Ok(profiles)
}

/// Every simple graph on `n` labelled nodes.
pub fn all_graphs(n: usize) -> impl Iterator<Item = Graph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j))).collect();
    (0u64..(1 << pairs.len())).map(move |mask| {
        let edges: Vec<(usize, usize)> =
            pairs.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &e)| e).collect();
        Graph::from_edges(n, &edges).expect("simple graph")
    })
}
