//! Inner loops over bipolar (`i8`) and accumulator (`i32`) components.
//!
//! Each kernel has a portable body; on x86-64 the same body is also compiled
//! with AVX2 enabled and picked at run time, which lets the compiler widen
//! the `i8` products and `i8 -> i32` adds.

#[inline(always)]
fn bind_assign_body(out: &mut [i8], v: &[i8]) {
    for (o, &x) in out.iter_mut().zip(v) {
        *o *= x;
    }
}

#[inline(always)]
fn add_assign_body(acc: &mut [i32], v: &[i8]) {
    for (a, &x) in acc.iter_mut().zip(v) {
        *a += x as i32;
    }
}

#[inline(always)]
fn roll_body(
    block: &[i8],
    gather: &[u32],
    leaving: &[i8],
    entering: &[i8],
    next: &mut [i8],
    acc: &mut [i32],
) {
    check_roll(block, gather, leaving, entering, next, acc);
    for (n, &src) in next.iter_mut().zip(gather) {
        // Gather tables come from validated bijections on 0..dim.
        *n = unsafe { *block.get_unchecked(src as usize) };
    }
    for (((n, &l), &e), a) in next
        .iter_mut()
        .zip(leaving)
        .zip(entering)
        .zip(acc.iter_mut())
    {
        let v = *n * l * e;
        *n = v;
        *a += v as i32;
    }
}

fn check_roll(
    block: &[i8],
    gather: &[u32],
    leaving: &[i8],
    entering: &[i8],
    next: &[i8],
    acc: &[i32],
) {
    let dim = block.len();
    assert!(
        gather.len() == dim
            && leaving.len() == dim
            && entering.len() == dim
            && next.len() == dim
            && acc.len() == dim
    );
}

#[cfg(target_arch = "x86_64")]
mod avx2 {
    #[target_feature(enable = "avx2")]
    pub unsafe fn bind_assign(out: &mut [i8], v: &[i8]) {
        super::bind_assign_body(out, v)
    }

    #[target_feature(enable = "avx2")]
    pub unsafe fn add_assign(acc: &mut [i32], v: &[i8]) {
        super::add_assign_body(acc, v)
    }

    #[target_feature(enable = "avx2")]
    pub unsafe fn roll(
        block: &[i8],
        gather: &[u32],
        leaving: &[i8],
        entering: &[i8],
        next: &mut [i8],
        acc: &mut [i32],
    ) {
        super::roll_body(block, gather, leaving, entering, next, acc)
    }
}

#[inline]
fn has_avx2() -> bool {
    #[cfg(target_arch = "x86_64")]
    {
        std::arch::is_x86_feature_detected!("avx2")
    }
    #[cfg(not(target_arch = "x86_64"))]
    {
        false
    }
}

/// `out[j] *= v[j]`
pub(crate) fn bind_assign(out: &mut [i8], v: &[i8]) {
    assert_eq!(out.len(), v.len());
    #[cfg(target_arch = "x86_64")]
    if has_avx2() {
        return unsafe { avx2::bind_assign(out, v) };
    }
    bind_assign_body(out, v)
}

/// `acc[j] += v[j]`
pub(crate) fn add_assign(acc: &mut [i32], v: &[i8]) {
    assert_eq!(acc.len(), v.len());
    #[cfg(target_arch = "x86_64")]
    if has_avx2() {
        return unsafe { avx2::add_assign(acc, v) };
    }
    add_assign_body(acc, v)
}

/// One rolling-encoder step:
/// `next[j] = block[gather[j]] * leaving[j] * entering[j]; acc[j] += next[j]`.
pub(crate) fn roll(
    block: &[i8],
    gather: &[u32],
    leaving: &[i8],
    entering: &[i8],
    next: &mut [i8],
    acc: &mut [i32],
) {
    #[cfg(target_arch = "x86_64")]
    if has_avx2() {
        return unsafe { avx2::roll(block, gather, leaving, entering, next, acc) };
    }
    roll_body(block, gather, leaving, entering, next, acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dispatched_kernels_match_portable_bodies() {
        let dim = 1003;
        let block: Vec<i8> = (0..dim).map(|i| if i % 3 == 0 { 1 } else { -1 }).collect();
        let leaving: Vec<i8> = (0..dim).map(|i| if i % 5 < 2 { 1 } else { -1 }).collect();
        let entering: Vec<i8> = (0..dim).map(|i| if i % 7 < 4 { -1 } else { 1 }).collect();
        let gather: Vec<u32> = (0..dim as u32).map(|i| (i * 7 + 3) % dim as u32).collect();

        let (mut n1, mut n2) = (vec![0i8; dim], vec![0i8; dim]);
        let (mut a1, mut a2) = (vec![5i32; dim], vec![5i32; dim]);
        roll(&block, &gather, &leaving, &entering, &mut n1, &mut a1);
        roll_body(&block, &gather, &leaving, &entering, &mut n2, &mut a2);
        assert_eq!((n1, a1), (n2, a2));

        let mut b1 = entering.clone();
        bind_assign(&mut b1, &leaving);
        let expected: Vec<i8> = entering.iter().zip(&leaving).map(|(a, b)| a * b).collect();
        assert_eq!(b1, expected);

        let mut acc = vec![1i32; dim];
        add_assign(&mut acc, &entering);
        assert!(acc.iter().zip(&entering).all(|(&a, &e)| a == 1 + e as i32));
    }
}
