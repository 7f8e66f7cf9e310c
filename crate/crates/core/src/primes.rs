//! Prime sieve backing every prime-indexed partial sum.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<u64>>>>> = OnceLock::new();

/// All primes `<= pmax` in ascending order.
///
/// Results are memoised per `pmax`; the returned list is shared and immutable.
pub fn prime_sieve(pmax: u64) -> Arc<Vec<u64>> {
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().expect("sieve cache poisoned").get(&pmax) {
        return Arc::clone(hit);
    }
    let primes = Arc::new(sieve(pmax));
    cache
        .lock()
        .expect("sieve cache poisoned")
        .insert(pmax, Arc::clone(&primes));
    primes
}

fn sieve(pmax: u64) -> Vec<u64> {
    if pmax < 2 {
        return Vec::new();
    }
    let n = pmax as usize;
    let mut composite = vec![false; n + 1];
    let mut i = 2usize;
    while i * i <= n {
        if !composite[i] {
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
        i += 1;
    }
    (2..=n)
        .filter(|&k| !composite[k])
        .map(|k| k as u64)
        .collect()
}
