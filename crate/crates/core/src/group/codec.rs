use super::{point_from_bytes, scalar_from_bytes, GroupElement, Scalar};
use crate::error::{Error, Result};

/// Append-only little-endian encoder.
#[derive(Default, Debug, Clone)]
pub struct Writer {
    buf: Vec<u8>,
}

impl Writer {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.buf
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.buf
    }

    pub fn len(&self) -> usize {
        self.buf.len()
    }

    pub fn is_empty(&self) -> bool {
        self.buf.is_empty()
    }

    pub fn u8(&mut self, v: u8) -> &mut Self {
        self.buf.push(v);
        self
    }

    pub fn u16(&mut self, v: u16) -> &mut Self {
        self.buf.extend_from_slice(&v.to_le_bytes());
        self
    }

    /// 3-byte little-endian integer, the width of a ring offset.
    pub fn u24(&mut self, v: u32) -> &mut Self {
        debug_assert!(v < 1 << 24);
        self.buf.extend_from_slice(&v.to_le_bytes()[..3]);
        self
    }

    pub fn u32(&mut self, v: u32) -> &mut Self {
        self.buf.extend_from_slice(&v.to_le_bytes());
        self
    }

    pub fn point(&mut self, p: &GroupElement) -> &mut Self {
        self.buf.extend_from_slice(p.compress().as_bytes());
        self
    }

    pub fn scalar(&mut self, s: &Scalar) -> &mut Self {
        self.buf.extend_from_slice(s.as_bytes());
        self
    }

    pub fn raw(&mut self, bytes: &[u8]) -> &mut Self {
        self.buf.extend_from_slice(bytes);
        self
    }

    /// `u32` length prefix followed by the bytes.
    pub fn var_bytes(&mut self, bytes: &[u8]) -> &mut Self {
        self.u32(bytes.len() as u32);
        self.raw(bytes)
    }

    /// Proof framing: one-byte type tag and two-byte atom count.
    pub fn proof_header(&mut self, tag: u8, atoms: usize) -> &mut Self {
        self.u8(tag);
        self.u16(atoms as u16)
    }
}

/// Cursor over an encoded buffer. Every failure reports the byte offset at
/// which decoding stopped.
#[derive(Debug, Clone)]
pub struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    pub fn new(buf: &'a [u8]) -> Self {
        Self { buf, pos: 0 }
    }

    pub fn position(&self) -> usize {
        self.pos
    }

    pub fn remaining(&self) -> usize {
        self.buf.len() - self.pos
    }

    pub fn peek(&self) -> Option<&u8> {
        self.buf.get(self.pos)
    }

    /// Bytes consumed since `start`.
    pub fn consumed_since(&self, start: usize) -> &'a [u8] {
        &self.buf[start..self.pos]
    }

    pub fn error(&self, reason: &'static str) -> Error {
        Error::Decode { offset: self.pos, reason }
    }

    pub fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        if self.remaining() < n {
            return Err(self.error("unexpected end of input"));
        }
        let out = &self.buf[self.pos..self.pos + n];
        self.pos += n;
        Ok(out)
    }

    pub fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }

    pub fn u16(&mut self) -> Result<u16> {
        let b = self.take(2)?;
        Ok(u16::from_le_bytes([b[0], b[1]]))
    }

    pub fn u24(&mut self) -> Result<u32> {
        let b = self.take(3)?;
        Ok(u32::from_le_bytes([b[0], b[1], b[2], 0]))
    }

    pub fn u32(&mut self) -> Result<u32> {
        let b = self.take(4)?;
        Ok(u32::from_le_bytes([b[0], b[1], b[2], b[3]]))
    }

    pub fn point(&mut self) -> Result<GroupElement> {
        let at = self.pos;
        let b: [u8; 32] = self.take(32)?.try_into().expect("32 bytes");
        point_from_bytes(&b).ok_or(Error::Decode { offset: at, reason: "invalid group element" })
    }

    pub fn scalar(&mut self) -> Result<Scalar> {
        let at = self.pos;
        let b: [u8; 32] = self.take(32)?.try_into().expect("32 bytes");
        scalar_from_bytes(&b).ok_or(Error::Decode { offset: at, reason: "non-canonical scalar" })
    }

    pub fn points(&mut self, n: usize) -> Result<Vec<GroupElement>> {
        (0..n).map(|_| self.point()).collect()
    }

    pub fn scalars(&mut self, n: usize) -> Result<Vec<Scalar>> {
        (0..n).map(|_| self.scalar()).collect()
    }

    pub fn var_bytes(&mut self, max: usize) -> Result<Vec<u8>> {
        let len = self.u32()? as usize;
        if len > max {
            return Err(self.error("length prefix too large"));
        }
        Ok(self.take(len)?.to_vec())
    }

    /// Reads a proof header and checks both the tag and the atom count.
    pub fn proof_header(&mut self, tag: u8, atoms: usize) -> Result<()> {
        if self.u8()? != tag {
            return Err(Error::Decode { offset: self.pos - 1, reason: "unexpected proof tag" });
        }
        if self.u16()? as usize != atoms {
            return Err(Error::Decode { offset: self.pos - 2, reason: "proof atom count mismatch" });
        }
        Ok(())
    }

    /// Reads a proof header with a known tag and returns its atom count.
    pub fn proof_header_any(&mut self, tag: u8) -> Result<usize> {
        if self.u8()? != tag {
            return Err(Error::Decode { offset: self.pos - 1, reason: "unexpected proof tag" });
        }
        Ok(self.u16()? as usize)
    }

    pub fn finish(&self) -> Result<()> {
        if self.remaining() != 0 {
            return Err(self.error("trailing bytes"));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{mul_base, random_scalar};
    use proptest::prelude::*;
    use rand::rngs::OsRng;

    #[test]
    fn truncated_input_reports_offset() {
        let mut w = Writer::new();
        w.u32(7).point(&mul_base(&random_scalar(&mut OsRng)));
        let bytes = w.into_bytes();
        let mut r = Reader::new(&bytes[..20]);
        assert_eq!(r.u32().unwrap(), 7);
        assert_eq!(r.point(), Err(Error::Decode { offset: 4, reason: "unexpected end of input" }));
    }

    #[test]
    fn proof_header_checks_tag_and_count() {
        let mut w = Writer::new();
        w.proof_header(3, 6);
        let b = w.into_bytes();
        assert!(Reader::new(&b).proof_header(3, 6).is_ok());
        assert!(Reader::new(&b).proof_header(4, 6).is_err());
        assert!(Reader::new(&b).proof_header(3, 5).is_err());
    }

    proptest! {
        #[test]
        fn atoms_round_trip(seed in any::<[u8; 32]>(), wide in any::<[u8; 32]>(), off in 0u32..1 << 24) {
            let s = Scalar::from_bytes_mod_order(seed);
            let p = mul_base(&Scalar::from_bytes_mod_order(wide));
            let mut w = Writer::new();
            w.scalar(&s).point(&p).u24(off);
            let b = w.into_bytes();
            prop_assert_eq!(b.len(), 67);
            let mut r = Reader::new(&b);
            prop_assert_eq!(r.scalar().unwrap(), s);
            prop_assert_eq!(r.point().unwrap(), p);
            prop_assert_eq!(r.u24().unwrap(), off);
            prop_assert!(r.finish().is_ok());
        }
    }
}
