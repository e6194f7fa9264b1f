//! Walks in a flag graph, described by a start flag and a colour sequence.

use crate::error::{Error, Result};
use crate::maniplex::{Flag, Maniplex};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Walk {
    pub start: Flag,
    pub colours: Vec<usize>,
}

impl Walk {
    pub fn new(start: Flag, colours: Vec<usize>) -> Self {
        Walk { start, colours }
    }

    pub fn empty(start: Flag) -> Self {
        Walk {
            start,
            colours: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.colours.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colours.is_empty()
    }

    /// Checks the start flag and every colour against `m`.
    pub fn check(&self, m: &Maniplex) -> Result<()> {
        m.check_flag(self.start)?;
        for &c in &self.colours {
            m.check_colour(c)?;
        }
        Ok(())
    }

    /// Visited flags `u_0, u_1 = u_0^{c_1}, ...`; length is `len() + 1`.
    pub fn flags(&self, m: &Maniplex) -> Result<Vec<Flag>> {
        self.check(m)?;
        let mut out = Vec::with_capacity(self.len() + 1);
        let mut u = self.start;
        out.push(u);
        for &c in &self.colours {
            u = m.neighbour(u, c);
            out.push(u);
        }
        Ok(out)
    }

    pub fn end(&self, m: &Maniplex) -> Result<Flag> {
        self.check(m)?;
        Ok(self
            .colours
            .iter()
            .fold(self.start, |u, &c| m.neighbour(u, c)))
    }

    pub fn is_closed(&self, m: &Maniplex) -> Result<bool> {
        Ok(self.end(m)? == self.start)
    }

    /// `WW'`; requires `end(W) = start(W')`.
    pub fn concat(&self, m: &Maniplex, other: &Walk) -> Result<Walk> {
        let end = self.end(m)?;
        other.check(m)?;
        if end != other.start {
            return Err(Error::Walk(format!(
                "cannot concatenate: walk ends at {end}, next starts at {}",
                other.start
            )));
        }
        let mut colours = self.colours.clone();
        colours.extend_from_slice(&other.colours);
        Ok(Walk::new(self.start, colours))
    }

    /// `W^b` for a closed walk `W`.
    pub fn power(&self, m: &Maniplex, b: usize) -> Result<Walk> {
        if !self.is_closed(m)? {
            return Err(Error::Walk("only closed walks have powers".into()));
        }
        Ok(Walk::new(self.start, self.colours.repeat(b)))
    }

    /// `W^{-1}`: same edges in reverse order, starting at the end flag of `W`.
    pub fn reverse(&self, m: &Maniplex) -> Result<Walk> {
        let end = self.end(m)?;
        let mut colours = self.colours.clone();
        colours.reverse();
        Ok(Walk::new(end, colours))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> Maniplex {
        // rank 3 but tiny: colours 0 and 2 commute, colour 1 pairs 0<->2, 1<->3
        Maniplex::new(
            3,
            vec![vec![1, 0, 3, 2], vec![2, 3, 0, 1], vec![3, 2, 1, 0]],
        )
        .unwrap()
    }

    #[test]
    fn visited_flags_unfold_the_definition() {
        let m = square();
        let w = Walk::new(0, vec![0, 1]);
        assert_eq!(w.flags(&m).unwrap(), vec![0, 1, 3]);
        assert_eq!(w.end(&m).unwrap(), 3);
    }

    #[test]
    fn power_of_closed_walk() {
        let m = square();
        let w = Walk::new(0, vec![0, 2, 1]);
        assert_eq!(w.end(&m).unwrap(), 0);
        let p = w.power(&m, 2).unwrap();
        assert_eq!(p.len(), 6);
        assert!(p.is_closed(&m).unwrap());
        assert!(Walk::new(0, vec![0]).power(&m, 2).is_err());
    }

    #[test]
    fn reverse_is_an_involution() {
        let m = square();
        let w = Walk::new(1, vec![0, 1, 1, 2]);
        assert_eq!(w.reverse(&m).unwrap().reverse(&m).unwrap(), w);
    }

    #[test]
    fn concat_requires_matching_endpoints() {
        let m = square();
        let a = Walk::new(0, vec![0]);
        let b = Walk::new(1, vec![1]);
        assert_eq!(a.concat(&m, &b).unwrap(), Walk::new(0, vec![0, 1]));
        assert!(a.concat(&m, &Walk::new(0, vec![1])).is_err());
    }

    #[test]
    fn bad_colour_is_rejected() {
        let m = square();
        assert!(Walk::new(0, vec![3]).flags(&m).is_err());
        assert!(Walk::new(9, vec![]).flags(&m).is_err());
    }
}
