//! Oracles that never touch the library's searches.
#![allow(dead_code)]

use pathcat::groupoid::{Arrow, FinGroupoid};

/// Functors by backtracking over arrows, checked against every composable
/// pair. Each functor is its image of `src.arrows()`, in order.
pub fn brute_functors(src: &FinGroupoid, tgt: &FinGroupoid) -> Vec<Vec<Arrow>> {
    let arrows: Vec<Arrow> = src.arrows().collect();
    let targets: Vec<Arrow> = tgt.arrows().collect();
    let mut out = Vec::new();
    let mut img: Vec<Option<Arrow>> = vec![None; arrows.len()];
    go(0, &arrows, &targets, src, tgt, &mut img, &mut out);
    out
}

fn go(k: usize, arrows: &[Arrow], targets: &[Arrow], src: &FinGroupoid, tgt: &FinGroupoid, img: &mut Vec<Option<Arrow>>, out: &mut Vec<Vec<Arrow>>) {
    if k == arrows.len() {
        out.push(img.iter().map(|a| a.unwrap()).collect());
        return;
    }
    let a = arrows[k];
    for &fa in targets {
        // endpoints must agree with every arrow already placed
        let consistent = (0..k).all(|j| {
            let (b, fb) = (arrows[j], img[j].unwrap());
            (b.src != a.src || fb.src == fa.src)
                && (b.tgt != a.tgt || fb.tgt == fa.tgt)
                && (b.src != a.tgt || fb.src == fa.tgt)
                && (b.tgt != a.src || fb.tgt == fa.src)
        });
        if !consistent || (a == src.id(a.src) && fa != tgt.id(fa.src)) {
            continue;
        }
        img[k] = Some(fa);
        let composable_ok = (0..=k).all(|j| {
            (0..=k).all(|l| {
                let (g, f) = (arrows[j], arrows[l]);
                if f.tgt != g.src {
                    return true;
                }
                let gf = arrows.iter().position(|&b| b == src.compose(g, f)).unwrap();
                match img[gf] {
                    Some(x) => tgt.compose(img[j].unwrap(), img[l].unwrap()) == x,
                    None => true,
                }
            })
        });
        if composable_ok {
            go(k + 1, arrows, targets, src, tgt, img, out);
        }
        img[k] = None;
    }
}

fn object_image(src: &FinGroupoid, f: &[Arrow], x: u32) -> u32 {
    f[src.arrows().position(|a| a == src.id(x)).unwrap()].src
}

/// Natural transformations `f => g`, by trying every family of components.
pub fn brute_nat_count(src: &FinGroupoid, tgt: &FinGroupoid, f: &[Arrow], g: &[Arrow]) -> usize {
    let arrows: Vec<Arrow> = src.arrows().collect();
    let n = src.n_objects() as usize;
    let choices: Vec<Vec<Arrow>> = (0..n as u32).map(|x| tgt.hom(object_image(src, f, x), object_image(src, g, x))).collect();
    if choices.iter().any(|c| c.is_empty()) {
        return 0;
    }
    let mut count = 0;
    let mut pick = vec![0usize; n];
    loop {
        let alpha = |x: u32| choices[x as usize][pick[x as usize]];
        if arrows.iter().enumerate().all(|(k, a)| tgt.compose(alpha(a.tgt), f[k]) == tgt.compose(g[k], alpha(a.src))) {
            count += 1;
        }
        let mut i = 0;
        loop {
            if i == n {
                return count;
            }
            pick[i] += 1;
            if pick[i] < choices[i].len() {
                break;
            }
            pick[i] = 0;
            i += 1;
        }
    }
}

/// Every arrow out of an image object lifts to an arrow with that source.
pub fn brute_isofibration(src: &FinGroupoid, tgt: &FinGroupoid, f: &[Arrow]) -> bool {
    let arrows: Vec<Arrow> = src.arrows().collect();
    (0..src.n_objects()).all(|x| {
        let fx = object_image(src, f, x);
        tgt.arrows().filter(|a| a.src == fx).all(|a| arrows.iter().enumerate().any(|(k, b)| b.src == x && f[k] == a))
    })
}
