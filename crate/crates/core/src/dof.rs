//! Maximum degrees of freedom under NOMA with zero-forcing, the
//! DoF-achieving group sizes, and feasibility checks.
//!
//! With `N > M` GBSs, stream `j` must be nulled at the `N - |group_j|` GBSs
//! that do not decode it, which leaves a nonzero beam only when
//! `M > N - |group_j|`. Balancing the group sizes gives
//! `J* = floor(N / (N - M + 1))`.

use serde::{Deserialize, Serialize};

use crate::channel::ChannelSet;
use crate::error::{Error, Result};
use crate::linalg::{self, CVector};

/// Largest `N` accepted by [`dof_oracle`].
pub const ORACLE_LIMIT: usize = 10;

/// A DoF-achieving stream count together with its balanced group sizes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DofResult {
    /// Number of streams `J`.
    pub n_streams: usize,
    /// Group sizes, floor-sized groups first. Sums to `N`.
    pub group_sizes: Vec<usize>,
    /// How many leading groups have the floor size.
    pub split_index: usize,
}

/// `floor(N / (N - M + 1))`, defined only for `N > M >= 1`.
pub fn max_dof(n_gbs: usize, n_antennas: usize) -> Result<usize> {
    if n_antennas == 0 || n_gbs <= n_antennas {
        return Err(Error::AssumptionViolated { n_gbs, n_antennas });
    }
    Ok(n_gbs / (n_gbs - n_antennas + 1))
}

/// Splits `N` GBSs into `J` groups whose sizes differ by at most one.
pub fn group_sizes(n_gbs: usize, n_streams: usize) -> Result<DofResult> {
    if n_streams == 0 || n_streams > n_gbs {
        return Err(Error::InvalidStreamCount { n_streams, n_gbs });
    }
    let floor = n_gbs / n_streams;
    let ceil_count = n_gbs % n_streams;
    let split_index = n_streams - ceil_count;
    let group_sizes = (0..n_streams)
        .map(|j| if j < split_index { floor } else { floor + 1 })
        .collect();
    Ok(DofResult {
        n_streams,
        group_sizes,
        split_index,
    })
}

/// `group_sizes(N, max_dof(N, M))`.
pub fn dof_partition(n_gbs: usize, n_antennas: usize) -> Result<DofResult> {
    group_sizes(n_gbs, max_dof(n_gbs, n_antennas)?)
}

/// Consecutive index blocks `{0..s_1}, {s_1..s_1+s_2}, ...` for the given sizes.
pub fn contiguous_groups(sizes: &[usize]) -> Vec<Vec<usize>> {
    let mut start = 0;
    sizes
        .iter()
        .map(|&s| {
            let g = (start..start + s).collect();
            start += s;
            g
        })
        .collect()
}

/// Per-group verdict of a [`FeasibilityCertificate`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupFeasibility {
    pub group_size: usize,
    /// Number of ZF equations, `N - |group|`.
    pub complement_size: usize,
    /// `M > N - |group|`.
    pub counting_ok: bool,
    /// Numerical nullity of the stacked complement channels.
    pub nullity: usize,
    /// `nullity >= 1`.
    pub numerical_ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeasibilityCertificate {
    pub groups: Vec<GroupFeasibility>,
    pub counting_ok: bool,
    pub numerical_ok: bool,
}

impl FeasibilityCertificate {
    pub fn feasible(&self) -> bool {
        self.counting_ok && self.numerical_ok
    }
}

/// Checks that groups are nonempty, pairwise disjoint and index valid GBSs.
pub fn validate_groups(groups: &[Vec<usize>], n_gbs: usize) -> Result<()> {
    let mut seen = vec![false; n_gbs];
    for (j, g) in groups.iter().enumerate() {
        if g.is_empty() {
            return Err(Error::EmptyGroup { group: j });
        }
        for &n in g {
            if n >= n_gbs {
                return Err(Error::IndexOutOfRange { index: n, len: n_gbs });
            }
            if std::mem::replace(&mut seen[n], true) {
                return Err(Error::GroupOverlap { gbs: n });
            }
        }
    }
    Ok(())
}

/// Certifies ZF feasibility of a grouping with the default nullity threshold.
pub fn feasibility_certificate(channels: &ChannelSet, groups: &[Vec<usize>]) -> Result<FeasibilityCertificate> {
    feasibility_certificate_with_tol(channels, groups, linalg::DEFAULT_NULLITY_TOL)
}

/// Every GBS outside a group contributes one ZF equation for that group's
/// stream, whether or not it belongs to another group.
pub fn feasibility_certificate_with_tol(
    channels: &ChannelSet,
    groups: &[Vec<usize>],
    rel_tol: f64,
) -> Result<FeasibilityCertificate> {
    let n_gbs = channels.n_gbs();
    let m = channels.n_antennas();
    validate_groups(groups, n_gbs)?;

    let per_group: Vec<GroupFeasibility> = groups
        .iter()
        .map(|g| {
            let complement: Vec<&CVector> = (0..n_gbs)
                .filter(|n| !g.contains(n))
                .map(|n| &channels.channels[n])
                .collect();
            let stacked = linalg::stack_hermitian_rows(&complement, m);
            let nullity = m - linalg::numerical_rank(&stacked, rel_tol);
            GroupFeasibility {
                group_size: g.len(),
                complement_size: complement.len(),
                counting_ok: m > complement.len(),
                nullity,
                numerical_ok: nullity >= 1,
            }
        })
        .collect();
    Ok(FeasibilityCertificate {
        counting_ok: per_group.iter().all(|g| g.counting_ok),
        numerical_ok: per_group.iter().all(|g| g.numerical_ok),
        groups: per_group,
    })
}

/// Calls `visit` with every nonincreasing list of `parts` positive integers
/// summing to at most `total`. Stops early when `visit` returns `true`.
fn visit_size_assignments(total: usize, parts: usize, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
    fn rec(
        remaining: usize,
        parts_left: usize,
        max_part: usize,
        acc: &mut Vec<usize>,
        visit: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        if parts_left == 0 {
            return visit(acc);
        }
        // Every remaining part needs at least one GBS.
        let hi = max_part.min(remaining.saturating_sub(parts_left - 1));
        for size in (1..=hi).rev() {
            acc.push(size);
            if rec(remaining - size, parts_left - 1, size, acc, visit) {
                return true;
            }
            acc.pop();
        }
        false
    }
    if parts == 0 || parts > total {
        return false;
    }
    rec(total, parts, total, &mut Vec::with_capacity(parts), visit)
}

/// Whether some assignment of `n_streams` disjoint nonempty groups over
/// `n_gbs` GBSs gives every group at least `n_gbs - n_antennas + 1` members.
pub fn has_feasible_size_assignment(n_gbs: usize, n_antennas: usize, n_streams: usize) -> bool {
    let needed = (n_gbs + 1).saturating_sub(n_antennas);
    visit_size_assignments(n_gbs, n_streams, &mut |sizes| sizes.iter().all(|&s| s >= needed))
}

/// Exhaustive maximum DoF: the largest `J` admitting a feasible group-size
/// assignment, searched from `min(M, N)` downwards.
pub fn dof_oracle(n_gbs: usize, n_antennas: usize) -> Result<usize> {
    if n_gbs > ORACLE_LIMIT {
        return Err(Error::TooLargeForOracle {
            n_gbs,
            limit: ORACLE_LIMIT,
        });
    }
    if n_antennas == 0 || n_gbs <= n_antennas {
        return Err(Error::AssumptionViolated { n_gbs, n_antennas });
    }
    Ok((1..=n_antennas.min(n_gbs))
        .rev()
        .find(|&j| has_feasible_size_assignment(n_gbs, n_antennas, j))
        .unwrap_or(0))
}
