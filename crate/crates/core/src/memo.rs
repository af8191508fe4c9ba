use std::collections::HashMap;
use std::hash::Hash;
use std::sync::Mutex;

/// A thread-safe cache that is flushed wholesale once it reaches `capacity`.
pub(crate) struct Memo<K, V> {
    map: Mutex<Option<HashMap<K, V>>>,
    capacity: usize,
}

impl<K: Eq + Hash, V: Clone> Memo<K, V> {
    pub(crate) const fn new(capacity: usize) -> Self {
        Memo {
            map: Mutex::new(None),
            capacity,
        }
    }

    /// Returns the cached value or computes it outside the lock.
    pub(crate) fn get_or(&self, key: K, compute: impl FnOnce() -> V) -> V {
        if let Some(v) = self.lock().as_ref().and_then(|m| m.get(&key)) {
            return v.clone();
        }
        let v = compute();
        let mut guard = self.lock();
        let map = guard.get_or_insert_with(HashMap::new);
        if map.len() >= self.capacity {
            map.clear();
        }
        map.insert(key, v.clone());
        v
    }

    fn lock(&self) -> std::sync::MutexGuard<'_, Option<HashMap<K, V>>> {
        self.map.lock().unwrap_or_else(|e| e.into_inner())
    }
}
