//! Bounded lockstep comparison of a choreography with its projection.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::mc::{freshen, Choreography};
use crate::projection::{epp, prunes_to, ProjectabilityError};
use crate::sem::{enabled_redexes, execute, fire, is_terminated};
use crate::sp::{net_enabled, net_execute, net_fire};
use crate::syntax::ProcState;
use crate::trace::Outcome;

/// Upper bound on distinct configurations visited by one check.
pub const MAX_CONFIGURATIONS: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    /// A choreography step with no matching network step.
    ChoreographyToNetwork,
    /// A network step with no matching choreography step.
    NetworkToChoreography,
    /// One side has finished and the other has not.
    Termination,
    /// Final cell values differ.
    State,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::ChoreographyToNetwork => "choreography-to-network",
            Direction::NetworkToChoreography => "network-to-choreography",
            Direction::Termination => "termination",
            Direction::State => "state",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Failure {
    /// Depth of the configuration the failing step starts from.
    pub step: usize,
    pub direction: Direction,
    pub diagnostic: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CorrespondenceReport {
    /// Choreography transitions examined.
    pub steps_checked: usize,
    pub configurations: usize,
    pub completeness_failures: Vec<Failure>,
    pub soundness_failures: Vec<Failure>,
    /// The configuration bound was hit before the depth bound.
    pub truncated: bool,
    pub verdict: Verdict,
}

impl CorrespondenceReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

/// Explores every configuration reachable from `c, state` in at most `depth`
/// steps. At each one, every choreography step must be matched by a network
/// step of `epp(c, state)` with the same action into a network that prunes to
/// the projection of the reduct, and every network step must be matched the
/// same way by a choreography step. Leftmost runs of both sides with `fuel`
/// steps must also end in the same cell values when both terminate.
pub fn check_correspondence(
    c: &Choreography,
    state: &ProcState,
    depth: usize,
    fuel: usize,
) -> Result<CorrespondenceReport, ProjectabilityError> {
    let start = Arc::new(freshen(c));
    let initial = epp(&start, state)?;
    let mut completeness = Vec::new();
    let mut soundness = Vec::new();
    let mut steps_checked = 0;
    let mut seen: HashSet<(Arc<Choreography>, ProcState)> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert((start.clone(), state.clone()));
    queue.push_back((start.clone(), state.clone(), initial.clone(), 0usize));
    let mut truncated = false;

    while let Some((chor, sigma, net, level)) = queue.pop_front() {
        if is_terminated(&chor) != net.is_terminated() {
            soundness.push(Failure {
                step: level,
                direction: Direction::Termination,
                diagnostic: format!("choreography `{chor}` against network `{net}`"),
            });
        }
        if level == depth {
            continue;
        }
        let net_steps: Vec<_> = net_enabled(&net).iter().map(|r| net_fire(&net, r)).collect();
        let mut chor_steps = Vec::new();
        for redex in enabled_redexes(&chor) {
            let mut sigma2 = sigma.clone();
            let (next, action) = fire(&chor, &mut sigma2, &redex).expect("enabled redexes fire");
            steps_checked += 1;
            match epp(&next, &sigma2) {
                Ok(projected) => {
                    let matched = net_steps.iter().any(|(n2, a2)| *a2 == action && prunes_to(n2, &projected));
                    if !matched {
                        completeness.push(Failure {
                            step: level,
                            direction: Direction::ChoreographyToNetwork,
                            diagnostic: format!("`{action}` from `{chor}` has no matching network step"),
                        });
                    }
                    if seen.insert((next.clone(), sigma2.clone())) {
                        if seen.len() > MAX_CONFIGURATIONS {
                            truncated = true;
                        } else {
                            queue.push_back((next.clone(), sigma2.clone(), projected.clone(), level + 1));
                        }
                    }
                    chor_steps.push((action, projected));
                }
                Err(e) => completeness.push(Failure {
                    step: level,
                    direction: Direction::ChoreographyToNetwork,
                    diagnostic: format!("reduct `{next}` of `{action}` is not projectable: {e}"),
                }),
            }
        }
        for (n2, action) in &net_steps {
            if !chor_steps.iter().any(|(a, projected)| a == action && prunes_to(n2, projected)) {
                soundness.push(Failure {
                    step: level,
                    direction: Direction::NetworkToChoreography,
                    diagnostic: format!("network step `{action}` from `{net}` has no matching choreography step"),
                });
            }
        }
    }

    let chor_run = execute(&start, state, fuel);
    let net_run = net_execute(&initial, fuel);
    if chor_run.outcome == Outcome::Terminated && net_run.outcome == Outcome::Terminated {
        let names: Vec<_> = initial.processes.keys().cloned().collect();
        if chor_run.state.restrict(&names) != net_run.network.values().restrict(&names) {
            soundness.push(Failure {
                step: chor_run.steps,
                direction: Direction::State,
                diagnostic: format!("choreography ends in {} but network in {}", chor_run.state, net_run.network.values()),
            });
        }
    } else if chor_run.outcome == Outcome::Terminated || net_run.outcome == Outcome::Terminated {
        soundness.push(Failure {
            step: chor_run.steps.max(net_run.steps),
            direction: Direction::Termination,
            diagnostic: format!("choreography run {} but network run {}", chor_run.outcome, net_run.outcome),
        });
    }

    let verdict = if completeness.is_empty() && soundness.is_empty() { Verdict::Pass } else { Verdict::Fail };
    Ok(CorrespondenceReport {
        steps_checked,
        configurations: seen.len(),
        completeness_failures: completeness,
        soundness_failures: soundness,
        truncated,
        verdict,
    })
}
