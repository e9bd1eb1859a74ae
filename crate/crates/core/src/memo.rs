//! Process-wide memo tables safe for concurrent lookup and idempotent insertion.

use std::any::{Any, TypeId};
use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

type Table = HashMap<(TypeId, &'static str, u64, Vec<i64>), Arc<dyn Any + Send + Sync>>;

fn table() -> &'static RwLock<Table> {
    static T: OnceLock<RwLock<Table>> = OnceLock::new();
    T.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Returns the cached value for `(kind, ctx, key)`, computing it if absent.
///
/// Concurrent callers may compute the same value twice; the first insertion
/// wins and every caller receives that one.
pub fn cached<V, E>(
    kind: &'static str,
    ctx: u64,
    key: Vec<i64>,
    compute: impl FnOnce() -> Result<V, E>,
) -> Result<Arc<V>, E>
where
    V: Any + Send + Sync,
{
    let k = (TypeId::of::<V>(), kind, ctx, key);
    if let Some(v) = table().read().unwrap().get(&k) {
        return Ok(v.clone().downcast::<V>().expect("memo type"));
    }
    let v: Arc<dyn Any + Send + Sync> = Arc::new(compute()?);
    let mut w = table().write().unwrap();
    let entry = w.entry(k).or_insert(v);
    Ok(entry.clone().downcast::<V>().expect("memo type"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_insert_wins() {
        let a = cached::<u32, ()>("test", 0, vec![1], || Ok(5)).unwrap();
        let b = cached::<u32, ()>("test", 0, vec![1], || Ok(6)).unwrap();
        assert_eq!(*a, 5);
        assert_eq!(*b, 5);
    }

    #[test]
    fn concurrent_lookups_agree() {
        let handles: Vec<_> = (0..8)
            .map(|i| std::thread::spawn(move || *cached::<u64, ()>("conc", 0, vec![7], || Ok(i)).unwrap()))
            .collect();
        let vals: Vec<u64> = handles.into_iter().map(|h| h.join().unwrap()).collect();
        assert!(vals.windows(2).all(|w| w[0] == w[1]));
    }
}
