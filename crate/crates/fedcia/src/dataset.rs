//! Raw rating ingestion, implicit-feedback binarization, per-user
//! train/validation/test splitting, and user-to-client partitioning.

use std::collections::HashMap;
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;
use std::sync::Arc;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::rng::{stream, StreamKind};
use crate::{Error, Result};

/// On-disk rating file layouts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FileFormat {
    /// `user\titem\trating\ttimestamp`
    TabSeparated,
    /// `user::item::rating::timestamp`
    DoubleColonSeparated,
}

/// Bidirectional raw-id <-> dense-index table.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IdMap {
    to_raw: Vec<String>,
    to_index: HashMap<String, u32>,
}

impl IdMap {
    fn intern(&mut self, raw: &str) -> u32 {
        if let Some(&ix) = self.to_index.get(raw) {
            return ix;
        }
        let ix = self.to_raw.len() as u32;
        self.to_raw.push(raw.to_string());
        self.to_index.insert(raw.to_string(), ix);
        ix
    }

    pub fn len(&self) -> usize {
        self.to_raw.len()
    }

    pub fn is_empty(&self) -> bool {
        self.to_raw.is_empty()
    }

    pub fn raw(&self, index: u32) -> &str {
        &self.to_raw[index as usize]
    }

    pub fn index(&self, raw: &str) -> Option<u32> {
        self.to_index.get(raw).copied()
    }
}

/// Dense-index id space shared by every view of one dataset.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IdSpace {
    pub users: IdMap,
    pub items: IdMap,
}

/// Deduplicated implicit-feedback interactions over a dense id space.
#[derive(Debug, Clone)]
pub struct InteractionDataset {
    num_users: usize,
    num_items: usize,
    interactions: Vec<(u32, u32)>,
    ids: Arc<IdSpace>,
}

impl fmt::Display for InteractionDataset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} users x {} items, {} interactions",
            self.num_users,
            self.num_items,
            self.interactions.len()
        )
    }
}

impl InteractionDataset {
    pub fn num_users(&self) -> usize {
        self.num_users
    }

    pub fn num_items(&self) -> usize {
        self.num_items
    }

    pub fn interactions(&self) -> &[(u32, u32)] {
        &self.interactions
    }

    pub fn len(&self) -> usize {
        self.interactions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.interactions.is_empty()
    }

    pub fn id_space(&self) -> &Arc<IdSpace> {
        &self.ids
    }

    /// Interactions grouped by user, preserving insertion order.
    pub fn by_user(&self) -> Vec<Vec<u32>> {
        let mut per_user = vec![Vec::new(); self.num_users];
        for &(u, i) in &self.interactions {
            per_user[u as usize].push(i);
        }
        per_user
    }

    fn view(&self, interactions: Vec<(u32, u32)>) -> InteractionDataset {
        InteractionDataset {
            num_users: self.num_users,
            num_items: self.num_items,
            interactions,
            ids: Arc::clone(&self.ids),
        }
    }
}

/// Train/validation/test views over one shared id space.
#[derive(Debug, Clone)]
pub struct SplitDataset {
    pub train: InteractionDataset,
    pub validation: InteractionDataset,
    pub test: InteractionDataset,
}

/// Assignment of every user to exactly one client.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClientPartition {
    assignments: Vec<u32>,
    num_clients: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PartitionMode {
    /// Shuffle users and deal them round-robin; sizes differ by at most 1.
    BalancedRandom,
    /// Client k holds exactly user k.
    OneUserPerClient,
}

impl ClientPartition {
    pub fn num_clients(&self) -> usize {
        self.num_clients
    }

    pub fn client_of(&self, user: u32) -> u32 {
        self.assignments[user as usize]
    }

    pub fn assignments(&self) -> &[u32] {
        &self.assignments
    }

    /// Users of each client, ascending within a client.
    pub fn members(&self) -> Vec<Vec<u32>> {
        let mut members = vec![Vec::new(); self.num_clients];
        for (user, &client) in self.assignments.iter().enumerate() {
            members[client as usize].push(user as u32);
        }
        members
    }
}

/// Load a rating file and binarize it to implicit feedback.
///
/// Ratings below `rating_threshold` are dropped (all kept when absent);
/// raw ids are remapped to dense 0-based indices in first-appearance
/// order; duplicate (user, item) pairs collapse to one interaction.
/// Lines starting with `#` and blank lines are skipped.
pub fn load_interactions(
    path: impl AsRef<Path>,
    format: FileFormat,
    rating_threshold: Option<f64>,
) -> Result<InteractionDataset> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let reader = BufReader::new(file);

    let mut ids = IdSpace::default();
    let mut seen = HashMap::new();
    let mut interactions = Vec::new();

    for (line_no, line) in reader.lines().enumerate() {
        let line = line.map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = match format {
            FileFormat::TabSeparated => trimmed.split('\t').collect(),
            FileFormat::DoubleColonSeparated => trimmed.split("::").collect(),
        };
        if fields.len() < 3 {
            return Err(Error::MalformedLine {
                path: path.to_path_buf(),
                line: line_no + 1,
                reason: format!("expected user, item, rating[, timestamp]; got {trimmed:?}"),
            });
        }
        let rating: f64 = fields[2].trim().parse().map_err(|_| Error::MalformedLine {
            path: path.to_path_buf(),
            line: line_no + 1,
            reason: format!("unparseable rating {:?}", fields[2]),
        })?;
        if let Some(threshold) = rating_threshold {
            if rating < threshold {
                continue;
            }
        }
        let user = ids.users.intern(fields[0].trim());
        let item = ids.items.intern(fields[1].trim());
        if seen.insert((user, item), ()).is_none() {
            interactions.push((user, item));
        }
    }

    if interactions.is_empty() {
        return Err(Error::EmptyDataset);
    }
    Ok(InteractionDataset {
        num_users: ids.users.len(),
        num_items: ids.items.len(),
        interactions,
        ids: Arc::new(ids),
    })
}

/// Build a dataset directly from dense-index pairs (synthetic inputs and
/// tests). Raw ids are the decimal indices.
pub fn dataset_from_pairs(
    num_users: usize,
    num_items: usize,
    pairs: impl IntoIterator<Item = (u32, u32)>,
) -> InteractionDataset {
    let mut ids = IdSpace::default();
    for u in 0..num_users {
        ids.users.intern(&u.to_string());
    }
    for i in 0..num_items {
        ids.items.intern(&i.to_string());
    }
    let mut seen = HashMap::new();
    let mut interactions = Vec::new();
    for (u, i) in pairs {
        if seen.insert((u, i), ()).is_none() {
            interactions.push((u, i));
        }
    }
    InteractionDataset {
        num_users,
        num_items,
        interactions,
        ids: Arc::new(ids),
    }
}

/// Per-user stratified random split.
///
/// Each user's interactions are shuffled with a user-specific stream and
/// cut so the global fractions hold approximately. Users with fewer than
/// 3 interactions keep everything in train; otherwise at least one
/// interaction stays in train.
pub fn split_dataset(
    ds: &InteractionDataset,
    test_fraction: f64,
    validation_fraction_of_train: f64,
    seed: u64,
) -> Result<SplitDataset> {
    for (name, f) in [
        ("test_fraction", test_fraction),
        ("validation_fraction_of_train", validation_fraction_of_train),
    ] {
        if !(0.0..=1.0).contains(&f) {
            return Err(Error::InvalidConfig(format!("{name} {f} outside [0, 1]")));
        }
    }

    let mut train = Vec::new();
    let mut validation = Vec::new();
    let mut test = Vec::new();

    for (user, items) in ds.by_user().into_iter().enumerate() {
        let user = user as u32;
        let n = items.len();
        if n == 0 {
            continue;
        }
        if n < 3 {
            train.extend(items.into_iter().map(|i| (user, i)));
            continue;
        }
        let mut shuffled = items;
        shuffled.shuffle(&mut stream(seed, StreamKind::Split, &[user as u64]));

        let n_test = ((n as f64 * test_fraction).round() as usize).min(n - 1);
        let remaining = n - n_test;
        let n_val =
            ((remaining as f64 * validation_fraction_of_train).round() as usize).min(remaining - 1);

        for (pos, item) in shuffled.into_iter().enumerate() {
            let entry = (user, item);
            if pos < n_test {
                test.push(entry);
            } else if pos < n_test + n_val {
                validation.push(entry);
            } else {
                train.push(entry);
            }
        }
    }

    Ok(SplitDataset {
        train: ds.view(train),
        validation: ds.view(validation),
        test: ds.view(test),
    })
}

/// Assign users to `num_clients` clients.
pub fn partition_clients(
    ds: &InteractionDataset,
    num_clients: usize,
    mode: PartitionMode,
    seed: u64,
) -> Result<ClientPartition> {
    let num_users = ds.num_users();
    match mode {
        PartitionMode::OneUserPerClient => Ok(ClientPartition {
            assignments: (0..num_users as u32).collect(),
            num_clients: num_users,
        }),
        PartitionMode::BalancedRandom => {
            if num_clients == 0 || num_clients > num_users {
                return Err(Error::ClientCountOutOfRange {
                    requested: num_clients,
                    num_users,
                });
            }
            let mut users: Vec<u32> = (0..num_users as u32).collect();
            users.shuffle(&mut stream(seed, StreamKind::Partition, &[]));
            let mut assignments = vec![0u32; num_users];
            for (pos, &user) in users.iter().enumerate() {
                assignments[user as usize] = (pos % num_clients) as u32;
            }
            Ok(ClientPartition {
                assignments,
                num_clients,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;
    use std::io::Write;

    fn write_temp(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    #[test]
    fn loads_tab_separated_with_dedup_and_first_appearance_order() {
        let f = write_temp("7\t9\t5\t0\n7\t9\t3\t1\n8\t9\t4\t2\n");
        let ds = load_interactions(f.path(), FileFormat::TabSeparated, None).unwrap();
        assert_eq!(ds.num_users(), 2);
        assert_eq!(ds.num_items(), 1);
        assert_eq!(ds.len(), 2); // duplicate collapsed
        assert_eq!(ds.id_space().users.raw(0), "7");
        assert_eq!(ds.id_space().users.index("8"), Some(1));
    }

    #[test]
    fn single_user_duplicate_collapses_to_one() {
        let f = write_temp("7\t9\t5\t0\n7\t9\t3\t1\n");
        let ds = load_interactions(f.path(), FileFormat::TabSeparated, None).unwrap();
        assert_eq!((ds.num_users(), ds.num_items(), ds.len()), (1, 1, 1));
    }

    #[test]
    fn double_colon_format_and_threshold() {
        let f = write_temp("1::10::5::0\n1::11::2::0\n# comment\n2::10::4::0\n");
        let ds =
            load_interactions(f.path(), FileFormat::DoubleColonSeparated, Some(4.0)).unwrap();
        assert_eq!(ds.len(), 2); // the rating-2 line filtered out
        assert_eq!(ds.num_items(), 1);
    }

    #[test]
    fn empty_file_is_an_error() {
        let f = write_temp("");
        assert!(matches!(
            load_interactions(f.path(), FileFormat::TabSeparated, None),
            Err(Error::EmptyDataset)
        ));
    }

    #[test]
    fn malformed_line_reports_line_number() {
        let f = write_temp("1\t2\t3\t4\nbroken line\n");
        match load_interactions(f.path(), FileFormat::TabSeparated, None) {
            Err(Error::MalformedLine { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected malformed-line error, got {other:?}"),
        }
    }

    #[test]
    fn missing_file_is_an_io_error() {
        assert!(matches!(
            load_interactions("/nonexistent/u.data", FileFormat::TabSeparated, None),
            Err(Error::Io { .. })
        ));
    }

    #[test]
    fn loading_is_idempotent() {
        let f = write_temp("1\t2\t3\t0\n4\t5\t1\t0\n1\t5\t2\t0\n");
        let a = load_interactions(f.path(), FileFormat::TabSeparated, None).unwrap();
        let b = load_interactions(f.path(), FileFormat::TabSeparated, None).unwrap();
        assert_eq!(a.interactions(), b.interactions());
        assert_eq!(a.id_space(), b.id_space());
    }

    #[test]
    fn split_ratio_matches_worked_example() {
        // 10 interactions, test 0.2, val 0.1 of the remainder -> 7/1/2.
        let ds = dataset_from_pairs(1, 10, (0..10).map(|i| (0, i)));
        let split = split_dataset(&ds, 0.2, 0.1, 7).unwrap();
        assert_eq!(split.test.len(), 2);
        assert_eq!(split.validation.len(), 1);
        assert_eq!(split.train.len(), 7);
    }

    #[test]
    fn split_partitions_the_interaction_set_exactly() {
        let ds = dataset_from_pairs(
            5,
            20,
            (0..5u32).flat_map(|u| (0..(4 + u * 3)).map(move |i| (u, i))),
        );
        let split = split_dataset(&ds, 0.25, 0.15, 3).unwrap();
        let mut union: Vec<(u32, u32)> = split
            .train
            .interactions()
            .iter()
            .chain(split.validation.interactions())
            .chain(split.test.interactions())
            .copied()
            .collect();
        union.sort_unstable();
        let mut source: Vec<(u32, u32)> = ds.interactions().to_vec();
        source.sort_unstable();
        assert_eq!(union.len(), ds.len()); // disjoint
        assert_eq!(union, source); // union equals source
        assert!(Arc::ptr_eq(split.train.id_space(), split.test.id_space()));
    }

    #[test]
    fn every_user_keeps_a_train_interaction() {
        let ds = dataset_from_pairs(4, 12, (0..4u32).flat_map(|u| (0..6).map(move |i| (u, i))));
        let split = split_dataset(&ds, 0.9, 0.9, 11).unwrap();
        let per_user = split.train.by_user();
        for items in per_user {
            assert!(!items.is_empty());
        }
    }

    #[test]
    fn tiny_users_go_fully_to_train() {
        let ds = dataset_from_pairs(1, 2, [(0, 0), (0, 1)]);
        let split = split_dataset(&ds, 0.5, 0.5, 1).unwrap();
        assert_eq!(split.train.len(), 2);
        assert_eq!(split.test.len() + split.validation.len(), 0);
    }

    #[test]
    fn zero_test_fraction_leaves_test_empty() {
        let ds = dataset_from_pairs(2, 10, (0..10u32).map(|i| (i % 2, i)));
        let split = split_dataset(&ds, 0.0, 0.2, 5).unwrap();
        assert!(split.test.is_empty());
        assert_eq!(split.train.len() + split.validation.len(), 10);
    }

    #[test]
    fn same_seed_gives_identical_splits() {
        let ds = dataset_from_pairs(3, 30, (0..3u32).flat_map(|u| (0..10).map(move |i| (u, i))));
        let a = split_dataset(&ds, 0.2, 0.1, 42).unwrap();
        let b = split_dataset(&ds, 0.2, 0.1, 42).unwrap();
        assert_eq!(a.train.interactions(), b.train.interactions());
        assert_eq!(a.validation.interactions(), b.validation.interactions());
        assert_eq!(a.test.interactions(), b.test.interactions());
    }

    #[test]
    fn out_of_range_fractions_rejected() {
        let ds = dataset_from_pairs(1, 3, [(0, 0), (0, 1), (0, 2)]);
        assert!(split_dataset(&ds, 1.5, 0.0, 0).is_err());
        assert!(split_dataset(&ds, 0.0, -0.1, 0).is_err());
    }

    #[test]
    fn balanced_partition_sizes_differ_by_at_most_one() {
        let ds = dataset_from_pairs(943, 2, (0..943u32).map(|u| (u, u % 2)));
        let p = partition_clients(&ds, 100, PartitionMode::BalancedRandom, 9).unwrap();
        let sizes: Vec<usize> = p.members().iter().map(Vec::len).collect();
        assert_eq!(sizes.iter().filter(|&&s| s == 10).count(), 43);
        assert_eq!(sizes.iter().filter(|&&s| s == 9).count(), 57);
        let covered: HashSet<u32> = p.members().into_iter().flatten().collect();
        assert_eq!(covered.len(), 943);
    }

    #[test]
    fn single_client_holds_everyone() {
        let ds = dataset_from_pairs(5, 2, (0..5u32).map(|u| (u, 0)));
        let p = partition_clients(&ds, 1, PartitionMode::BalancedRandom, 0).unwrap();
        assert!(p.assignments().iter().all(|&c| c == 0));
    }

    #[test]
    fn one_user_per_client_is_the_identity() {
        let ds = dataset_from_pairs(7, 2, (0..7u32).map(|u| (u, 0)));
        let p = partition_clients(&ds, 3, PartitionMode::OneUserPerClient, 0).unwrap();
        assert_eq!(p.num_clients(), 7);
        for u in 0..7 {
            assert_eq!(p.client_of(u), u);
        }
    }

    #[test]
    fn client_count_out_of_range_rejected() {
        let ds = dataset_from_pairs(5, 2, (0..5u32).map(|u| (u, 0)));
        assert!(partition_clients(&ds, 0, PartitionMode::BalancedRandom, 0).is_err());
        assert!(partition_clients(&ds, 6, PartitionMode::BalancedRandom, 0).is_err());
    }
}
