//! Idempotent-insert memo table shared by the recursions.

use std::collections::HashMap;
use std::fmt::Debug;
use std::hash::Hash;
use std::sync::RwLock;

/// Thread-safe memo store. Re-inserting an equal value is a no-op; inserting
/// a different value for an existing key is an internal inconsistency and
/// panics.
#[derive(Debug, Default)]
pub struct MemoTable<K, V> {
    inner: RwLock<HashMap<K, V>>,
}

impl<K, V> MemoTable<K, V>
where
    K: Eq + Hash + Clone + Debug,
    V: Clone + PartialEq + Debug,
{
    pub fn new() -> Self {
        Self { inner: RwLock::new(HashMap::new()) }
    }

    pub fn get(&self, key: &K) -> Option<V> {
        self.inner.read().expect("memo lock poisoned").get(key).cloned()
    }

    /// Inserts `value` and returns the stored value.
    pub fn insert(&self, key: K, value: V) -> V {
        let mut map = self.inner.write().expect("memo lock poisoned");
        if let Some(existing) = map.get(&key) {
            assert!(*existing == value, "memo conflict at {key:?}: stored {existing:?}, computed {value:?}");
            return existing.clone();
        }
        map.insert(key, value.clone());
        value
    }

    pub fn len(&self) -> usize {
        self.inner.read().expect("memo lock poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicate_equal_insert_is_fine() {
        let t = MemoTable::new();
        t.insert(1, "a");
        t.insert(1, "a");
        assert_eq!(t.get(&1), Some("a"));
        assert_eq!(t.len(), 1);
    }

    #[test]
    #[should_panic(expected = "memo conflict")]
    fn conflicting_insert_panics() {
        let t = MemoTable::new();
        t.insert(1, "a");
        t.insert(1, "b");
    }

    #[test]
    fn concurrent_inserts() {
        let t = MemoTable::new();
        std::thread::scope(|s| {
            for _ in 0..4 {
                s.spawn(|| {
                    for k in 0..100u32 {
                        t.insert(k, k * 2);
                    }
                });
            }
        });
        assert_eq!(t.len(), 100);
        assert_eq!(t.get(&7), Some(14));
    }
}
