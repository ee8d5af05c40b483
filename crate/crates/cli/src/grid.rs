use std::str::FromStr;

/// Inclusive arithmetic grid written as `start:stop:step`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Range {
    /// Grid points, each computed as `start + i·step` so no error accumulates.
    pub fn points(&self) -> Vec<f64> {
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        (0..n).map(|i| self.start + self.step * i as f64).collect()
    }
}

impl FromStr for Range {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let [start, stop, step] = parts.as_slice() else {
            return Err(format!("range `{s}` must look like start:stop:step"));
        };
        let parse = |v: &str| {
            v.trim()
                .parse::<f64>()
                .map_err(|e| format!("range `{s}`: `{v}` is not a number ({e})"))
        };
        let r = Range {
            start: parse(start)?,
            stop: parse(stop)?,
            step: parse(step)?,
        };
        if !(r.start.is_finite() && r.stop.is_finite()) {
            return Err(format!("range `{s}` has non-finite bounds"));
        }
        if !(r.step > 0.0 && r.step.is_finite()) {
            return Err(format!("range `{s}` needs a positive step"));
        }
        if r.stop < r.start {
            return Err(format!("range `{s}` is empty (stop < start)"));
        }
        Ok(r)
    }
}

#[cfg(test)]
mod tests {
    use super::Range;

    #[test]
    fn loss_grid() {
        let r: Range = "0:50:0.5".parse().unwrap();
        let p = r.points();
        assert_eq!(p.len(), 101);
        assert_eq!(p[0], 0.0);
        assert_eq!(p[100], 50.0);
        assert_eq!(p[57], 28.5);
    }

    #[test]
    fn single_point() {
        let r: Range = "3:3:1".parse().unwrap();
        assert_eq!(r.points(), vec![3.0]);
    }

    #[test]
    fn stop_not_on_grid() {
        let r: Range = "0:1:0.3".parse().unwrap();
        assert_eq!(r.points().len(), 4);
    }

    #[test]
    fn rejects_bad_input() {
        for bad in ["0:50", "0:50:0", "0:50:-1", "5:1:1", "a:1:1", "0:1:0.1:2"] {
            assert!(bad.parse::<Range>().is_err(), "{bad}");
        }
    }
}
