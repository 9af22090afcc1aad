//! Document-level co-word matrix and agglomerative clustering.
//!
//! Co-occurrence is counted per document: `counts[i][j]` is the number of
//! documents whose token stream contains both terms, and the diagonal holds
//! plain document frequency. Clustering runs bottom-up over cosine distance
//! between matrix rows with average linkage; distance ties are broken by the
//! lexicographically smallest pair of cluster labels, where a cluster's label
//! is its smallest member term. That makes the merge sequence — not just the
//! final partition — reproducible.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;

use crate::corpus::TokenStream;
use crate::error::{Error, Result};

/// Symmetric term co-occurrence counts over a corpus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CowordMatrix {
    pub terms: Vec<String>,
    pub counts: Vec<Vec<u64>>,
}

/// One agglomerative merge step. `a` and `b` are node ids: leaves are
/// `0..n` in matrix term order, the cluster formed by merge `i` is `n + i`.
/// `a` always names the cluster with the smaller label.
#[derive(Debug, Clone, PartialEq)]
pub struct Merge {
    pub a: usize,
    pub b: usize,
    pub height: f64,
}

/// Full merge history; leaves are the matrix terms.
#[derive(Debug, Clone, PartialEq)]
pub struct Dendrogram {
    pub leaves: Vec<String>,
    pub merges: Vec<Merge>,
}

pub fn coword_matrix(streams: &[TokenStream], terms: &[String]) -> Result<CowordMatrix> {
    if terms.is_empty() {
        return Err(Error::EmptyInput { what: "term list" });
    }
    let mut seen = BTreeSet::new();
    for t in terms {
        if !seen.insert(t) {
            return Err(Error::DuplicateTerm { term: t.clone() });
        }
    }

    let index: BTreeMap<&str, usize> = terms
        .iter()
        .enumerate()
        .map(|(i, t)| (t.as_str(), i))
        .collect();

    // Membership per document computes in parallel; the accumulation below is
    // commutative counting, folded in document order for determinism.
    let memberships: Vec<Vec<usize>> = streams
        .par_iter()
        .map(|stream| {
            let mut present: Vec<usize> = stream
                .tokens
                .iter()
                .filter_map(|t| index.get(t.as_str()).copied())
                .collect();
            present.sort_unstable();
            present.dedup();
            present
        })
        .collect();

    let n = terms.len();
    let mut counts = vec![vec![0u64; n]; n];
    for present in &memberships {
        for (pos, &i) in present.iter().enumerate() {
            counts[i][i] += 1;
            for &j in &present[pos + 1..] {
                counts[i][j] += 1;
                counts[j][i] += 1;
            }
        }
    }
    Ok(CowordMatrix {
        terms: terms.to_vec(),
        counts,
    })
}

impl CowordMatrix {
    /// CSV with a leading `term` header column and one row per term.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("term");
        for t in &self.terms {
            out.push(',');
            out.push_str(t);
        }
        out.push('\n');
        for (i, t) in self.terms.iter().enumerate() {
            out.push_str(t);
            for c in &self.counts[i] {
                out.push(',');
                out.push_str(&c.to_string());
            }
            out.push('\n');
        }
        out
    }

    /// Undirected weighted edge list: `term_a,term_b,weight` for every
    /// co-occurring pair (i < j, weight > 0).
    pub fn edge_list(&self) -> String {
        let mut out = String::from("term_a,term_b,weight\n");
        for i in 0..self.terms.len() {
            for j in i + 1..self.terms.len() {
                if self.counts[i][j] > 0 {
                    out.push_str(&format!(
                        "{},{},{}\n",
                        self.terms[i], self.terms[j], self.counts[i][j]
                    ));
                }
            }
        }
        out
    }
}

/// Cosine distance between two count rows, computed from exact integer
/// dot products so the value is independent of term order. A zero row is at
/// distance 1 from everything except another zero row (identical → 0).
fn cosine_distance(a: &[u64], b: &[u64]) -> f64 {
    let dot: u128 = a.iter().zip(b).map(|(&x, &y)| x as u128 * y as u128).sum();
    let na: u128 = a.iter().map(|&x| x as u128 * x as u128).sum();
    let nb: u128 = b.iter().map(|&x| x as u128 * x as u128).sum();
    match (na, nb) {
        (0, 0) => 0.0,
        (0, _) | (_, 0) => 1.0,
        // max(0) absorbs the tiny negative values that identical rows can
        // produce through rounding; heights must stay non-negative.
        _ => (1.0 - dot as f64 / ((na as f64).sqrt() * (nb as f64).sqrt())).max(0.0),
    }
}

struct Cluster {
    node: usize,
    /// Smallest member term; drives tie-breaking and merge operand order.
    label: String,
    size: usize,
}

pub fn hierarchical_cluster(
    matrix: &CowordMatrix,
    k: usize,
) -> Result<(Dendrogram, Vec<Vec<String>>)> {
    let n = matrix.terms.len();
    if k == 0 || k > n {
        return Err(Error::ClusterCountOutOfRange { k, n });
    }

    // Active clusters stay sorted by label so the min scan is deterministic.
    let mut active: Vec<Cluster> = matrix
        .terms
        .iter()
        .enumerate()
        .map(|(i, t)| Cluster {
            node: i,
            label: t.clone(),
            size: 1,
        })
        .collect();
    active.sort_by(|a, b| a.label.cmp(&b.label));

    // Average linkage maintained as sums over leaf pairs:
    //   sum(A ∪ B, C) = sum(A, C) + sum(B, C)
    // so the height of a merge is sum / (|A| * |B|), an exact recurrence.
    let mut pair_sums: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    for i in 0..n {
        for j in i + 1..n {
            pair_sums.insert((i, j), cosine_distance(&matrix.counts[i], &matrix.counts[j]));
        }
    }
    let sum_of = |sums: &BTreeMap<(usize, usize), f64>, a: usize, b: usize| -> f64 {
        sums[&(a.min(b), a.max(b))]
    };

    let mut merges = Vec::with_capacity(n - 1);
    for step in 0..n - 1 {
        let mut best: Option<(f64, usize, usize)> = None; // (height, idx_a, idx_b)
        for ia in 0..active.len() {
            for ib in ia + 1..active.len() {
                let (ca, cb) = (&active[ia], &active[ib]);
                let height =
                    sum_of(&pair_sums, ca.node, cb.node) / (ca.size * cb.size) as f64;
                // Strictly-less keeps the first (lexicographically smallest
                // label pair) candidate on ties: active is label-sorted.
                if best.is_none_or(|(h, _, _)| height < h) {
                    best = Some((height, ia, ib));
                }
            }
        }
        let (height, ia, ib) = best.unwrap();
        let new_node = n + step;
        let removed_b = active.remove(ib);
        let removed_a = active.remove(ia);
        merges.push(Merge {
            a: removed_a.node,
            b: removed_b.node,
            height,
        });

        for other in &active {
            let s = sum_of(&pair_sums, removed_a.node, other.node)
                + sum_of(&pair_sums, removed_b.node, other.node);
            let key = (new_node.min(other.node), new_node.max(other.node));
            pair_sums.insert(key, s);
        }
        let merged = Cluster {
            node: new_node,
            label: removed_a.label, // smaller of the two by sort order
            size: removed_a.size + removed_b.size,
        };
        let at = active
            .binary_search_by(|c| c.label.cmp(&merged.label))
            .unwrap_err();
        active.insert(at, merged);
    }

    let dendrogram = Dendrogram {
        leaves: matrix.terms.clone(),
        merges,
    };
    let clusters = dendrogram.cut(k)?;
    Ok((dendrogram, clusters))
}

impl Dendrogram {
    /// Partition after applying the first `|terms| − k` merges. Clusters are
    /// sorted internally and by first member.
    pub fn cut(&self, k: usize) -> Result<Vec<Vec<String>>> {
        let n = self.leaves.len();
        if k == 0 || k > n {
            return Err(Error::ClusterCountOutOfRange { k, n });
        }
        let mut members: BTreeMap<usize, Vec<usize>> =
            (0..n).map(|i| (i, vec![i])).collect();
        for (step, merge) in self.merges.iter().take(n - k).enumerate() {
            let mut a = members.remove(&merge.a).expect("merge refers to live node");
            let b = members.remove(&merge.b).expect("merge refers to live node");
            a.extend(b);
            members.insert(n + step, a);
        }
        let mut clusters: Vec<Vec<String>> = members
            .into_values()
            .map(|leaf_ids| {
                let mut terms: Vec<String> = leaf_ids
                    .into_iter()
                    .map(|i| self.leaves[i].clone())
                    .collect();
                terms.sort();
                terms
            })
            .collect();
        clusters.sort();
        Ok(clusters)
    }

    /// Merge table CSV: `step,node_a,node_b,height` with leaf ids `0..n` and
    /// merge `i` creating node `n + i`.
    pub fn to_merge_csv(&self) -> String {
        let mut out = String::from("step,node_a,node_b,height\n");
        for (i, m) in self.merges.iter().enumerate() {
            out.push_str(&format!("{},{},{},{}\n", i, m.a, m.b, m.height));
        }
        out
    }

    /// Nested-list rendering of the topology, children ordered as merged,
    /// e.g. `((alpha,beta),gamma)`.
    pub fn to_nested_list(&self) -> String {
        let n = self.leaves.len();
        if self.merges.is_empty() {
            return self.leaves.first().cloned().unwrap_or_default();
        }
        fn render(node: usize, n: usize, leaves: &[String], merges: &[Merge]) -> String {
            if node < n {
                leaves[node].clone()
            } else {
                let m = &merges[node - n];
                format!(
                    "({},{})",
                    render(m.a, n, leaves, merges),
                    render(m.b, n, leaves, merges)
                )
            }
        }
        render(n + self.merges.len() - 1, n, &self.leaves, &self.merges)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn stream(id: &str, tokens: &[&str]) -> TokenStream {
        TokenStream {
            doc_id: id.into(),
            tokens: tokens.iter().map(|t| t.to_string()).collect(),
        }
    }

    fn terms(list: &[&str]) -> Vec<String> {
        list.iter().map(|t| t.to_string()).collect()
    }

    #[test]
    fn matrix_counts_shared_documents() {
        let m = coword_matrix(
            &[stream("1", &["x", "y"]), stream("2", &["y", "x", "x"])],
            &terms(&["x", "y"]),
        )
        .unwrap();
        assert_eq!(m.counts, vec![vec![2, 2], vec![2, 2]]);
    }

    #[test]
    fn matrix_disjoint_terms_have_zero_off_diagonal() {
        let m = coword_matrix(
            &[stream("1", &["x"]), stream("2", &["y"])],
            &terms(&["x", "y"]),
        )
        .unwrap();
        assert_eq!(m.counts, vec![vec![1, 0], vec![0, 1]]);
    }

    #[test]
    fn matrix_ignores_tokens_outside_term_list() {
        let m = coword_matrix(&[stream("1", &["x", "noise"])], &terms(&["x"])).unwrap();
        assert_eq!(m.counts, vec![vec![1]]);
    }

    #[test]
    fn matrix_rejects_empty_and_duplicate_terms() {
        assert!(matches!(
            coword_matrix(&[], &[]),
            Err(Error::EmptyInput { .. })
        ));
        assert!(matches!(
            coword_matrix(&[], &terms(&["x", "x"])),
            Err(Error::DuplicateTerm { .. })
        ));
    }

    /// Set-intersection oracle: per-document term sets, pairwise intersect.
    fn oracle_matrix(streams: &[TokenStream], terms: &[String]) -> Vec<Vec<u64>> {
        let sets: Vec<BTreeSet<&str>> = streams
            .iter()
            .map(|s| s.tokens.iter().map(|t| t.as_str()).collect())
            .collect();
        let n = terms.len();
        let mut counts = vec![vec![0u64; n]; n];
        for (i, ti) in terms.iter().enumerate() {
            for (j, tj) in terms.iter().enumerate() {
                counts[i][j] = sets
                    .iter()
                    .filter(|s| s.contains(ti.as_str()) && s.contains(tj.as_str()))
                    .count() as u64;
            }
        }
        counts
    }

    #[test]
    fn matrix_matches_set_intersection_oracle() {
        // 8 documents over 12 terms, seeded so the fixture is stable.
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let vocab: Vec<String> = (0..12).map(|i| format!("term{i:02}")).collect();
        let streams: Vec<TokenStream> = (0..8)
            .map(|d| {
                let len = rng.gen_range(3..20);
                TokenStream {
                    doc_id: d.to_string(),
                    tokens: (0..len)
                        .map(|_| vocab[rng.gen_range(0..vocab.len())].clone())
                        .collect(),
                }
            })
            .collect();
        let m = coword_matrix(&streams, &vocab).unwrap();
        assert_eq!(m.counts, oracle_matrix(&streams, &vocab));
    }

    proptest! {
        #[test]
        fn matrix_symmetry_and_diagonal_dominance(
            docs in proptest::collection::vec(
                proptest::collection::vec(0usize..6, 0..12), 1..8)
        ) {
            let vocab: Vec<String> = (0..6).map(|i| format!("t{i}")).collect();
            let streams: Vec<TokenStream> = docs
                .iter()
                .enumerate()
                .map(|(d, picks)| TokenStream {
                    doc_id: d.to_string(),
                    tokens: picks.iter().map(|&i| vocab[i].clone()).collect(),
                })
                .collect();
            let m = coword_matrix(&streams, &vocab).unwrap();
            for i in 0..6 {
                for j in 0..6 {
                    prop_assert_eq!(m.counts[i][j], m.counts[j][i]);
                    prop_assert!(m.counts[i][j] <= m.counts[i][i].min(m.counts[j][j]));
                }
            }
        }
    }

    #[test]
    fn identical_rows_merge_first_at_zero() {
        let m = CowordMatrix {
            terms: terms(&["a", "b", "c"]),
            counts: vec![vec![2, 2, 0], vec![2, 2, 0], vec![0, 0, 5]],
        };
        let (dendro, _) = hierarchical_cluster(&m, 1).unwrap();
        assert_eq!(dendro.merges[0].a, 0);
        assert_eq!(dendro.merges[0].b, 1);
        assert!(dendro.merges[0].height.abs() < 1e-12);
    }

    #[test]
    fn k_equals_n_yields_singletons() {
        let m = CowordMatrix {
            terms: terms(&["a", "b", "c"]),
            counts: vec![vec![1, 1, 0], vec![1, 1, 0], vec![0, 0, 1]],
        };
        let (_, clusters) = hierarchical_cluster(&m, 3).unwrap();
        assert_eq!(clusters, vec![vec!["a"], vec!["b"], vec!["c"]]);
    }

    #[test]
    fn k_out_of_range_errors() {
        let m = CowordMatrix {
            terms: terms(&["a", "b"]),
            counts: vec![vec![1, 0], vec![0, 1]],
        };
        assert!(matches!(
            hierarchical_cluster(&m, 0),
            Err(Error::ClusterCountOutOfRange { k: 0, n: 2 })
        ));
        assert!(matches!(
            hierarchical_cluster(&m, 3),
            Err(Error::ClusterCountOutOfRange { k: 3, n: 2 })
        ));
    }

    #[test]
    fn heights_non_decreasing() {
        let m = random_matrix(20, 30, 11);
        let (dendro, _) = hierarchical_cluster(&m, 1).unwrap();
        for w in dendro.merges.windows(2) {
            assert!(w[1].height >= w[0].height - 1e-12);
        }
    }

    #[test]
    fn cut_produces_partition() {
        let m = random_matrix(15, 25, 3);
        for k in 1..=15 {
            let (_, clusters) = hierarchical_cluster(&m, k).unwrap();
            assert_eq!(clusters.len(), k);
            let mut all: Vec<&String> = clusters.iter().flatten().collect();
            all.sort();
            all.dedup();
            assert_eq!(all.len(), 15);
        }
    }

    /// Random co-word matrix built from random document term-sets, so the
    /// matrix invariants (symmetry, diagonal dominance) hold by construction.
    fn random_matrix(n_terms: usize, n_docs: usize, seed: u64) -> CowordMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let vocab: Vec<String> = (0..n_terms).map(|i| format!("w{i:02}")).collect();
        let streams: Vec<TokenStream> = (0..n_docs)
            .map(|d| {
                let len = rng.gen_range(1..10);
                TokenStream {
                    doc_id: d.to_string(),
                    tokens: (0..len)
                        .map(|_| vocab[rng.gen_range(0..n_terms)].clone())
                        .collect(),
                }
            })
            .collect();
        coword_matrix(&streams, &vocab).unwrap()
    }

    /// Naive O(n³) agglomerative oracle: clusters as leaf sets, average
    /// distance recomputed from the base matrix at every step, same
    /// label-pair tie rule.
    fn oracle_cluster(matrix: &CowordMatrix) -> Vec<(String, String, f64)> {
        let n = matrix.terms.len();
        let mut base = vec![vec![0.0f64; n]; n];
        for (i, row) in base.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = cosine_distance(&matrix.counts[i], &matrix.counts[j]);
            }
        }
        let mut clusters: Vec<BTreeSet<usize>> = (0..n).map(|i| BTreeSet::from([i])).collect();
        let label = |c: &BTreeSet<usize>, m: &CowordMatrix| -> String {
            c.iter().map(|&i| m.terms[i].clone()).min().unwrap()
        };
        let mut out = Vec::new();
        while clusters.len() > 1 {
            let mut best: Option<(f64, String, String, usize, usize)> = None;
            for i in 0..clusters.len() {
                for j in i + 1..clusters.len() {
                    let mut sum = 0.0;
                    for &a in &clusters[i] {
                        for &b in &clusters[j] {
                            sum += base[a][b];
                        }
                    }
                    let d = sum / (clusters[i].len() * clusters[j].len()) as f64;
                    let (la, lb) = {
                        let x = label(&clusters[i], matrix);
                        let y = label(&clusters[j], matrix);
                        if x < y { (x, y) } else { (y, x) }
                    };
                    let candidate = (d, la, lb, i, j);
                    best = Some(match best {
                        None => candidate,
                        Some(cur) => {
                            let newer = (candidate.0, &candidate.1, &candidate.2);
                            let older = (cur.0, &cur.1, &cur.2);
                            if newer.partial_cmp(&older).unwrap() == std::cmp::Ordering::Less
                            {
                                candidate
                            } else {
                                cur
                            }
                        }
                    });
                }
            }
            let (d, la, lb, i, j) = best.unwrap();
            out.push((la, lb, d));
            let merged: BTreeSet<usize> =
                clusters[i].union(&clusters[j]).copied().collect();
            clusters.remove(j);
            clusters.remove(i);
            clusters.push(merged);
        }
        out
    }

    /// Map a merge list back to (label_a, label_b, height) triples.
    fn merge_labels(dendro: &Dendrogram) -> Vec<(String, String, f64)> {
        let n = dendro.leaves.len();
        let mut labels: Vec<String> = dendro.leaves.clone();
        let mut out = Vec::new();
        for m in &dendro.merges {
            let la = labels[m.a].clone();
            let lb = labels[m.b].clone();
            labels.push(la.clone().min(lb.clone()));
            assert_eq!(labels.len() - 1, n + out.len());
            out.push((la.clone().min(lb.clone()), la.max(lb), m.height));
        }
        out
    }

    #[test]
    fn merge_sequence_matches_naive_oracle() {
        for seed in [1u64, 5, 9] {
            let m = random_matrix(20, 15, seed);
            let (dendro, _) = hierarchical_cluster(&m, 1).unwrap();
            let got = merge_labels(&dendro);
            let want = oracle_cluster(&m);
            assert_eq!(got.len(), want.len());
            for (g, w) in got.iter().zip(&want) {
                assert_eq!((&g.0, &g.1), (&w.0, &w.1), "seed {seed}");
                assert!((g.2 - w.2).abs() < 1e-12, "seed {seed}: {} vs {}", g.2, w.2);
            }
        }
    }

    #[test]
    fn partition_invariant_under_term_permutation() {
        let m = random_matrix(12, 18, 21);
        // Reverse the term order and permute rows/columns to match.
        let n = m.terms.len();
        let perm: Vec<usize> = (0..n).rev().collect();
        let permuted = CowordMatrix {
            terms: perm.iter().map(|&i| m.terms[i].clone()).collect(),
            counts: perm
                .iter()
                .map(|&i| perm.iter().map(|&j| m.counts[i][j]).collect())
                .collect(),
        };
        for k in [1, 3, 6, 12] {
            let (_, a) = hierarchical_cluster(&m, k).unwrap();
            let (_, b) = hierarchical_cluster(&permuted, k).unwrap();
            assert_eq!(a, b, "k = {k}");
        }
    }

    #[test]
    fn single_term_clusters_trivially() {
        let m = CowordMatrix {
            terms: terms(&["only"]),
            counts: vec![vec![3]],
        };
        let (dendro, clusters) = hierarchical_cluster(&m, 1).unwrap();
        assert!(dendro.merges.is_empty());
        assert_eq!(clusters, vec![vec!["only"]]);
        assert_eq!(dendro.to_nested_list(), "only");
    }

    #[test]
    fn csv_and_edge_list_shapes() {
        let m = coword_matrix(
            &[stream("1", &["x", "y"]), stream("2", &["x"])],
            &terms(&["x", "y"]),
        )
        .unwrap();
        assert_eq!(m.to_csv(), "term,x,y\nx,2,1\ny,1,1\n");
        assert_eq!(m.edge_list(), "term_a,term_b,weight\nx,y,1\n");
    }

    #[test]
    fn nested_list_and_merge_csv() {
        // a and b share a document profile; c is distant from both.
        let m = CowordMatrix {
            terms: terms(&["a", "b", "c"]),
            counts: vec![vec![3, 3, 0], vec![3, 3, 0], vec![0, 0, 4]],
        };
        let (dendro, _) = hierarchical_cluster(&m, 1).unwrap();
        assert_eq!(dendro.to_nested_list(), "((a,b),c)");
        let csv = dendro.to_merge_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("step,node_a,node_b,height"));
        assert_eq!(lines.next(), Some("0,0,1,0"));
        let last = lines.next().unwrap();
        assert!(last.starts_with("1,3,2,") || last.starts_with("1,2,3,"));
    }

    #[test]
    fn cosine_distance_edge_cases() {
        assert_eq!(cosine_distance(&[0, 0], &[0, 0]), 0.0);
        assert_eq!(cosine_distance(&[0, 0], &[1, 2]), 1.0);
        assert!(cosine_distance(&[1, 2], &[2, 4]).abs() < 1e-12);
        let d = cosine_distance(&[1, 0], &[0, 1]);
        assert!((d - 1.0).abs() < 1e-12);
    }
}
