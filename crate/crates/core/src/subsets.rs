//! Lexicographic enumeration of small subsets of `0..n`.
//!
//! The walk is a depth-first preorder, so subsets are produced in
//! lexicographic order of their ascending index sequences (`[0] < [0,1] <
//! [1]`). Visitors get push/pop callbacks and can keep incremental state.

pub(crate) trait SubsetVisitor {
    fn push(&mut self, index: usize);
    fn pop(&mut self, index: usize);
    fn visit(&mut self, subset: &[usize]);
}

/// Walks every subset whose smallest element is `root` and whose size lies
/// in `min_size..=max_size`.
pub(crate) fn walk_rooted<V: SubsetVisitor>(
    n: usize,
    root: usize,
    min_size: usize,
    max_size: usize,
    visitor: &mut V,
) {
    if root >= n || max_size == 0 || root + min_size > n {
        return;
    }
    let mut stack = Vec::with_capacity(max_size);
    stack.push(root);
    visitor.push(root);
    descend(n, min_size, max_size, &mut stack, visitor);
    visitor.pop(root);
}

fn descend<V: SubsetVisitor>(
    n: usize,
    min_size: usize,
    max_size: usize,
    stack: &mut Vec<usize>,
    visitor: &mut V,
) {
    if stack.len() >= min_size {
        visitor.visit(stack);
    }
    if stack.len() == max_size {
        return;
    }
    let next = stack.last().unwrap() + 1;
    for i in next..n {
        // not enough elements left to reach min_size
        if stack.len() + (n - i) < min_size {
            break;
        }
        stack.push(i);
        visitor.push(i);
        descend(n, min_size, max_size, stack, visitor);
        visitor.pop(i);
        stack.pop();
    }
}

/// `C(n, k)`, saturating at `u64::MAX`.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * u128::from(n - i) / u128::from(i + 1);
        if acc > u128::from(u64::MAX) {
            return u64::MAX;
        }
    }
    acc as u64
}
