//! Stream-to-GBS decoding groups.

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::channel::{self, ChannelSet, LinkNoiseProfile};
use crate::dof::{self, DofResult};
use crate::error::{Error, Result};
use crate::seed::{self, tag};

/// Disjoint decoding groups, one per stream, plus the per-GBS inverse map.
///
/// Serializes as `{"groups": [[...], ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "AssociationRepr", into = "AssociationRepr")]
pub struct Association {
    groups: Vec<Vec<usize>>,
    decode_map: Vec<Option<usize>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AssociationRepr {
    groups: Vec<Vec<usize>>,
    #[serde(default, skip_serializing)]
    n_gbs: Option<usize>,
}

impl TryFrom<AssociationRepr> for Association {
    type Error = Error;

    fn try_from(r: AssociationRepr) -> Result<Self> {
        let n_gbs = r
            .n_gbs
            .unwrap_or_else(|| r.groups.iter().flatten().map(|&n| n + 1).max().unwrap_or(0));
        Association::new(r.groups, n_gbs)
    }
}

impl From<Association> for AssociationRepr {
    fn from(a: Association) -> Self {
        AssociationRepr {
            groups: a.groups,
            n_gbs: None,
        }
    }
}

/// Which group sizes go to the strongest GBSs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SizeOrder {
    /// Sizes in the order emitted by [`dof::group_sizes`] (floor-sized first).
    #[default]
    AsGiven,
    /// Reversed, so the strongest GBSs form the larger groups last.
    Reversed,
}

impl Association {
    /// Builds an association over `n_gbs` GBSs. Members of each group are
    /// stored in ascending order.
    pub fn new(mut groups: Vec<Vec<usize>>, n_gbs: usize) -> Result<Self> {
        dof::validate_groups(&groups, n_gbs)?;
        let mut decode_map = vec![None; n_gbs];
        for (j, g) in groups.iter_mut().enumerate() {
            g.sort_unstable();
            for &n in g.iter() {
                decode_map[n] = Some(j);
            }
        }
        Ok(Self { groups, decode_map })
    }

    pub fn n_streams(&self) -> usize {
        self.groups.len()
    }

    pub fn n_gbs(&self) -> usize {
        self.decode_map.len()
    }

    pub fn groups(&self) -> &[Vec<usize>] {
        &self.groups
    }

    pub fn group(&self, stream: usize) -> &[usize] {
        &self.groups[stream]
    }

    pub fn decode_map(&self) -> &[Option<usize>] {
        &self.decode_map
    }

    /// Stream decoded by `gbs_index`, if any.
    pub fn decoded_stream(&self, gbs_index: usize) -> Result<Option<usize>> {
        self.decode_map
            .get(gbs_index)
            .copied()
            .ok_or(Error::IndexOutOfRange {
                index: gbs_index,
                len: self.decode_map.len(),
            })
    }
}

/// Stream decoded by `gbs_index` under `association`, if any.
pub fn decode_map(association: &Association, gbs_index: usize) -> Result<Option<usize>> {
    association.decoded_stream(gbs_index)
}

fn check_sizes(n_gbs: usize, sizes: &DofResult) -> Result<()> {
    let total: usize = sizes.group_sizes.iter().sum();
    if total != n_gbs {
        return Err(Error::SizeSumMismatch {
            got: total,
            expected: n_gbs,
        });
    }
    if let Some(j) = sizes.group_sizes.iter().position(|&s| s == 0) {
        return Err(Error::EmptyGroup { group: j });
    }
    Ok(())
}

fn block(order: &[usize], sizes: &[usize]) -> Vec<Vec<usize>> {
    let mut start = 0;
    sizes
        .iter()
        .map(|&s| {
            let g = order[start..start + s].to_vec();
            start += s;
            g
        })
        .collect()
}

fn ordered_sizes(sizes: &DofResult, order: SizeOrder) -> Vec<usize> {
    let mut s = sizes.group_sizes.clone();
    if order == SizeOrder::Reversed {
        s.reverse();
    }
    s
}

/// Groups GBSs into contiguous blocks of the score ranking (highest first,
/// ties by ascending index).
pub fn assign_by_scores(scores: &[f64], sizes: &DofResult, order: SizeOrder) -> Result<Association> {
    check_sizes(scores.len(), sizes)?;
    let mut ranking: Vec<usize> = (0..scores.len()).collect();
    ranking.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
    Association::new(block(&ranking, &ordered_sizes(sizes, order)), scores.len())
}

/// Multicasts each stream to GBSs of similar effective SINR: rank GBSs by
/// `||h_n||^2 / (Q_n + sigma_n^2)` and cut the ranking into consecutive blocks.
pub fn assign_by_effective_sinr(
    channels: &ChannelSet,
    profile: &LinkNoiseProfile,
    sizes: &DofResult,
) -> Result<Association> {
    assign_by_effective_sinr_ordered(channels, profile, sizes, SizeOrder::AsGiven)
}

pub fn assign_by_effective_sinr_ordered(
    channels: &ChannelSet,
    profile: &LinkNoiseProfile,
    sizes: &DofResult,
    order: SizeOrder,
) -> Result<Association> {
    let scores = channel::effective_sinrs(channels, profile)?;
    assign_by_scores(&scores, sizes, order)
}

/// Uniformly random permutation of the GBSs cut into blocks of `sizes`.
pub fn assign_random(n_gbs: usize, sizes: &DofResult, seed: u64) -> Result<Association> {
    check_sizes(n_gbs, sizes)?;
    let mut perm: Vec<usize> = (0..n_gbs).collect();
    perm.shuffle(&mut seed::rng(seed, &[tag::ASSOCIATION]));
    Association::new(block(&perm, &sizes.group_sizes), n_gbs)
}
