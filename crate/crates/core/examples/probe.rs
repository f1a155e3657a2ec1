use cube_core::bounds::{eigen_bound_check, hamming_ball_set};

fn main() {
    for n in [4usize, 6, 8, 10, 12, 14] {
        let mut prev = f64::INFINITY;
        let mut monotone = true;
        let mut line = format!("n={n:>2}:");
        for r in 0..n {
            let ball = hamming_ball_set(n, r).unwrap();
            let rep = eigen_bound_check(n, &ball).unwrap();
            let t = rep.extra["tightness"];
            if t > prev + 1e-12 {
                monotone = false;
            }
            prev = t;
            line.push_str(&format!(" {t:.3}"));
            assert!(rep.pass, "n={n} r={r} slack={}", rep.slack);
        }
        println!("{line} monotone={monotone}");
    }
}
