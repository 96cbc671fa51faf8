//! Row-major dense tensors and axis-wise linear maps.

use alloc::vec;
use alloc::vec::Vec;

/// Applies `kernel(input_line, output_line)` to every line along `axis`.
///
/// Returns the new data and shape; the extent along `axis` becomes `out_len`.
pub fn transform_axis<K>(
    data: &[f64],
    shape: &[usize],
    axis: usize,
    out_len: usize,
    mut kernel: K,
) -> (Vec<f64>, Vec<usize>)
where
    K: FnMut(&[f64], &mut [f64]),
{
    let n = shape[axis];
    let outer: usize = shape[..axis].iter().product();
    let inner: usize = shape[axis + 1..].iter().product();
    let mut out = vec![0.0; outer * out_len * inner];
    let mut line_in = vec![0.0; n];
    let mut line_out = vec![0.0; out_len];
    for o in 0..outer {
        for i in 0..inner {
            for t in 0..n {
                line_in[t] = data[(o * n + t) * inner + i];
            }
            kernel(&line_in, &mut line_out);
            for t in 0..out_len {
                out[(o * out_len + t) * inner + i] = line_out[t];
            }
        }
    }
    let mut new_shape = shape.to_vec();
    new_shape[axis] = out_len;
    (out, new_shape)
}

/// Row-major strides of a shape.
pub fn strides(shape: &[usize]) -> Vec<usize> {
    let mut s = vec![1; shape.len()];
    for j in (0..shape.len().saturating_sub(1)).rev() {
        s[j] = s[j + 1] * shape[j + 1];
    }
    s
}

/// Multi-index of a flat row-major offset.
pub fn unflatten(mut flat: usize, shape: &[usize], out: &mut [usize]) {
    for j in (0..shape.len()).rev() {
        out[j] = flat % shape[j];
        flat /= shape[j];
    }
}
