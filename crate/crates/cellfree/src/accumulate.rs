//! Order-independent Monte-Carlo accumulation.
//!
//! Draws are grouped into fixed chunks that are summed left to right; chunk
//! totals are then combined along a fixed binary tree. The floating-point
//! result depends only on the number of draws, never on how rayon schedules
//! the chunks.

use rayon::prelude::*;

pub const CHUNK: usize = 16;

fn tree<T, A: Fn(T, T) -> T>(mut parts: Vec<T>, add: &A) -> Option<T> {
    while parts.len() > 1 {
        let mut next = Vec::with_capacity(parts.len().div_ceil(2));
        let mut it = parts.into_iter();
        while let Some(a) = it.next() {
            match it.next() {
                Some(b) => next.push(add(a, b)),
                None => next.push(a),
            }
        }
        parts = next;
    }
    parts.pop()
}

/// `Σ_{i<n} draw(i)`, `None` when `n = 0`. The first error aborts the sum.
pub fn chunked_sum<T, E, F, A>(n: usize, draw: F, add: A) -> Result<Option<T>, E>
where
    T: Send,
    E: Send,
    F: Fn(usize) -> Result<T, E> + Sync,
    A: Fn(T, T) -> T + Sync,
{
    let chunks: Vec<T> = (0..n.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let mut acc = draw(c * CHUNK)?;
            for i in c * CHUNK + 1..((c + 1) * CHUNK).min(n) {
                acc = add(acc, draw(i)?);
            }
            Ok(acc)
        })
        .collect::<Result<_, E>>()?;
    Ok(tree(chunks, &add))
}
