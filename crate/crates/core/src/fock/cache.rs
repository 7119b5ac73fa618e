use crate::linalg::Matrix;
use crate::operators::SystemKey;
use std::collections::HashMap;
use std::hash::Hash;
use std::sync::{Arc, RwLock};

use super::Quotient;

/// Shared per-system matrix cache, keyed by the operator file's content hash.
///
/// Safe to share between threads; concurrent computations of the same key may
/// both run, and the first insertion wins.
#[derive(Debug, Default)]
pub struct SectorCache {
    pub(crate) creators: Table<(SystemKey, usize), Vec<Matrix>>,
    pub(crate) annihilators: Table<(SystemKey, usize), Vec<Matrix>>,
    pub(crate) grams: Table<(SystemKey, usize), Matrix>,
    pub(crate) quotients: Table<(SystemKey, usize, u64), Quotient>,
}

impl SectorCache {
    pub fn new() -> Self {
        Self::default()
    }

    /// Number of cached Gram matrices across all systems.
    pub fn gram_count(&self) -> usize {
        self.grams.len()
    }
}

#[derive(Debug)]
pub(crate) struct Table<K, V> {
    map: RwLock<HashMap<K, Arc<V>>>,
}

impl<K, V> Default for Table<K, V> {
    fn default() -> Self {
        Self {
            map: RwLock::new(HashMap::new()),
        }
    }
}

impl<K: Eq + Hash + Copy, V> Table<K, V> {
    pub(crate) fn get_or_try_insert<E>(
        &self,
        key: K,
        compute: impl FnOnce() -> Result<V, E>,
    ) -> Result<Arc<V>, E> {
        if let Some(v) = self.map.read().expect("cache lock poisoned").get(&key) {
            return Ok(Arc::clone(v));
        }
        // Computed outside the lock: `compute` may recurse into this table.
        let value = Arc::new(compute()?);
        let mut map = self.map.write().expect("cache lock poisoned");
        Ok(Arc::clone(map.entry(key).or_insert(value)))
    }

    pub(crate) fn len(&self) -> usize {
        self.map.read().expect("cache lock poisoned").len()
    }
}
