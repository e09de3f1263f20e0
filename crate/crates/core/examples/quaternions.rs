//! Similarity classes of quaternions and the conjugator onto the complex line.

use qhi::quat::{are_similar, canonicalize, similarity_conjugator};
use qhi::Quaternion;

fn main() {
    let q = Quaternion::new(0.5, 1.0, -2.0, 2.0);
    let u = Quaternion::new(1.0, 2.0, 0.0, -1.0).normalize();
    let p = u * q * u.inv();
    println!("q = {q}");
    println!("u q u^-1 = {p}");
    println!("class of q: {:?}", canonicalize(q).rep);
    println!("similar: {}", are_similar(q, p, 1e-12));

    let s = Quaternion::new(0.0, 0.0, 3.0, 4.0);
    let (r, x) = similarity_conjugator(s).unwrap();
    let back = x * Quaternion::new(0.0, r, 0.0, 0.0) * x.inv();
    println!("s = {s}, r = {r}, x (r i) x^-1 = {back}");
}
