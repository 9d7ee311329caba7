use rustc_hash::FxHashMap;

use super::Column;

#[derive(Clone, Copy)]
pub(crate) enum Rows<'a> {
    All(usize),
    Subset(&'a [usize]),
}

impl Rows<'_> {
    #[inline]
    fn len(&self) -> usize {
        match self {
            Rows::All(n) => *n,
            Rows::Subset(s) => s.len(),
        }
    }

    #[inline]
    fn get(&self, i: usize) -> usize {
        match self {
            Rows::All(_) => i,
            Rows::Subset(s) => s[i],
        }
    }
}

// Direct-address tables up to this many slots; larger key spaces fall back to hashing.
const DIRECT_SLOTS: u64 = 1 << 22;

/// Counts distinct code tuples by refining a dense group id one column at a
/// time: after column `k` every row carries the id of its projection onto
/// the first `k` columns.
pub(crate) fn distinct(columns: &[&Column], rows: Rows<'_>) -> u64 {
    let n = rows.len();
    if n == 0 || columns.is_empty() {
        return 0;
    }

    let first = columns[0];
    let mut ids = vec![0u32; n];
    let mut table = vec![u32::MAX; first.radix() as usize];
    let mut groups = 0u32;
    for (i, id) in ids.iter_mut().enumerate() {
        let slot = &mut table[first.codes[rows.get(i)] as usize];
        if *slot == u32::MAX {
            *slot = groups;
            groups += 1;
        }
        *id = *slot;
    }

    for col in &columns[1..] {
        if groups as usize == n {
            break;
        }
        let radix = col.radix() as u64;
        let space = groups as u64 * radix;
        let mut next = 0u32;
        if space <= DIRECT_SLOTS.max(4 * n as u64) {
            let mut table = vec![u32::MAX; space as usize];
            for (i, id) in ids.iter_mut().enumerate() {
                let key = *id as u64 * radix + col.codes[rows.get(i)] as u64;
                let slot = &mut table[key as usize];
                if *slot == u32::MAX {
                    *slot = next;
                    next += 1;
                }
                *id = *slot;
            }
        } else {
            let mut map: FxHashMap<u64, u32> = FxHashMap::default();
            map.reserve(n.min(space as usize));
            for (i, id) in ids.iter_mut().enumerate() {
                let key = *id as u64 * radix + col.codes[rows.get(i)] as u64;
                let fresh = next;
                let slot = *map.entry(key).or_insert(fresh);
                if slot == fresh {
                    next += 1;
                }
                *id = slot;
            }
        }
        groups = next;
    }
    groups as u64
}
