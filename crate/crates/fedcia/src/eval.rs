//! Top-K ranking evaluation over held-out interactions.

use crate::par;

/// Per-user top-K rankings plus the relevant (held-out) sets, for users
/// with at least one relevant item.
#[derive(Debug, Clone)]
pub struct RankingResult {
    k: usize,
    entries: Vec<UserRanking>,
}

#[derive(Debug, Clone)]
pub struct UserRanking {
    pub user: u32,
    /// Top items, best first; never contains excluded items.
    pub ranked: Vec<u32>,
    /// Sorted held-out items.
    pub relevant: Vec<u32>,
}

impl RankingResult {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn entries(&self) -> &[UserRanking] {
        &self.entries
    }
}

/// Rank unseen items per user by score (descending, ties broken by
/// ascending item index) and keep the top `k`.
///
/// `exclusions[u]` are items hidden from the candidate list (the user's
/// already-seen items); `relevant[u]` the held-out positives. Users with
/// no relevant items are skipped.
pub fn rank_top_k<F>(score_fn: F, exclusions: &[Vec<u32>], relevant: &[Vec<u32>], k: usize) -> RankingResult
where
    F: Fn(usize) -> Vec<f64> + Sync,
{
    assert!(k >= 1, "k must be at least 1");
    assert_eq!(exclusions.len(), relevant.len());
    let num_users = relevant.len();

    let entries: Vec<Option<UserRanking>> = par::map_indexed(num_users, |u| {
        if relevant[u].is_empty() {
            return None;
        }
        let scores = score_fn(u);
        let excluded = &exclusions[u];
        let mut candidates: Vec<(u32, f64)> = scores
            .iter()
            .enumerate()
            .filter(|(i, _)| excluded.binary_search(&(*i as u32)).is_err())
            .map(|(i, &s)| (i as u32, s))
            .collect();
        candidates.sort_unstable_by(|a, b| {
            b.1.partial_cmp(&a.1)
                .expect("scores must be comparable")
                .then(a.0.cmp(&b.0))
        });
        candidates.truncate(k);
        let mut rel = relevant[u].clone();
        rel.sort_unstable();
        Some(UserRanking {
            user: u as u32,
            ranked: candidates.into_iter().map(|(i, _)| i).collect(),
            relevant: rel,
        })
    });

    RankingResult {
        k,
        entries: entries.into_iter().flatten().collect(),
    }
}

fn mean_over_users(result: &RankingResult, per_user: impl Fn(&UserRanking) -> f64) -> f64 {
    if result.entries.is_empty() {
        return 0.0;
    }
    let sum: f64 = result.entries.iter().map(per_user).sum();
    sum / result.entries.len() as f64
}

fn hits(entry: &UserRanking) -> usize {
    entry
        .ranked
        .iter()
        .filter(|i| entry.relevant.binary_search(i).is_ok())
        .count()
}

/// Macro-averaged F1@K: harmonic mean of precision@K (hits / K) and
/// recall@K (hits / |relevant|), zero when both are zero.
pub fn f1_at_k(result: &RankingResult) -> f64 {
    let k = result.k as f64;
    mean_over_users(result, |e| {
        let h = hits(e) as f64;
        if h == 0.0 {
            return 0.0;
        }
        let precision = h / k;
        let recall = h / e.relevant.len() as f64;
        2.0 * precision * recall / (precision + recall)
    })
}

/// Mean reciprocal rank of the first relevant item within the top K,
/// zero when none appears.
pub fn mrr_at_k(result: &RankingResult) -> f64 {
    mean_over_users(result, |e| {
        e.ranked
            .iter()
            .position(|i| e.relevant.binary_search(i).is_ok())
            .map_or(0.0, |pos| 1.0 / (pos + 1) as f64)
    })
}

/// NDCG@K with unit gains: DCG discounts hits by `1/log2(rank+1)`, the
/// ideal DCG places `min(K, |relevant|)` hits at the top.
pub fn ndcg_at_k(result: &RankingResult) -> f64 {
    let discount = |rank: usize| 1.0 / ((rank + 1) as f64).log2();
    mean_over_users(result, |e| {
        let dcg: f64 = e
            .ranked
            .iter()
            .enumerate()
            .filter(|(_, i)| e.relevant.binary_search(i).is_ok())
            .map(|(pos, _)| discount(pos + 1))
            .sum();
        let ideal_hits = result.k.min(e.relevant.len());
        let idcg: f64 = (1..=ideal_hits).map(discount).sum();
        if idcg == 0.0 {
            0.0
        } else {
            dcg / idcg
        }
    })
}
