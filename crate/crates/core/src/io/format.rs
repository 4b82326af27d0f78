//! RWF1 / RWT1 binary containers. Little-endian throughout; read-after-write
//! is bit-identical.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use num_complex::Complex64;

use super::FrameStack;
use crate::error::{Error, Result};
use crate::field::{ComplexField, GridSpec};

const FIELD_MAGIC: &[u8; 4] = b"RWF1";
const STACK_MAGIC: &[u8; 4] = b"RWT1";
const VERSION: u32 = 1;
const FIELD_HEADER_LEN: usize = 4 + 4 + 4 + 4 + 8 + 8 + 8;
const STACK_HEADER_LEN: usize = 4 + 4 + 4 + 4 + 4 + 8 + 8 + 8;

struct Cursor<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, n: usize, expected_total: u64) -> Result<&'a [u8]> {
        if self.pos + n > self.buf.len() {
            return Err(Error::TruncatedPayload {
                expected: expected_total,
                found: self.buf.len() as u64,
            });
        }
        let out = &self.buf[self.pos..self.pos + n];
        self.pos += n;
        Ok(out)
    }

    fn u32(&mut self, expected_total: u64) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4, expected_total)?.try_into().unwrap()))
    }

    fn f64(&mut self, expected_total: u64) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8, expected_total)?.try_into().unwrap()))
    }
}

pub fn write_field_to<W: Write>(mut w: W, field: &ComplexField) -> Result<()> {
    w.write_all(FIELD_MAGIC)?;
    w.write_all(&VERSION.to_le_bytes())?;
    w.write_all(&(field.grid.nx as u32).to_le_bytes())?;
    w.write_all(&(field.grid.nz as u32).to_le_bytes())?;
    w.write_all(&field.grid.dx.to_le_bytes())?;
    w.write_all(&field.grid.dz.to_le_bytes())?;
    w.write_all(&field.freq.to_le_bytes())?;
    for v in &field.values {
        w.write_all(&v.re.to_le_bytes())?;
        w.write_all(&v.im.to_le_bytes())?;
    }
    Ok(())
}

pub fn write_field(path: impl AsRef<Path>, field: &ComplexField) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_field_to(&mut w, field)?;
    w.flush()?;
    Ok(())
}

pub fn read_field_from<R: Read>(mut r: R) -> Result<ComplexField> {
    let mut buf = Vec::new();
    r.read_to_end(&mut buf)?;
    parse_field(&buf)
}

pub fn read_field(path: impl AsRef<Path>) -> Result<ComplexField> {
    read_field_from(BufReader::new(File::open(path)?))
}

fn parse_field(buf: &[u8]) -> Result<ComplexField> {
    let mut c = Cursor { buf, pos: 0 };
    let magic = c.take(4, FIELD_HEADER_LEN as u64)?;
    if magic != FIELD_MAGIC {
        return Err(Error::BadMagic);
    }
    let version = c.u32(FIELD_HEADER_LEN as u64)?;
    if version != VERSION {
        return Err(Error::UnsupportedVersion(version));
    }
    let nx = c.u32(FIELD_HEADER_LEN as u64)? as usize;
    let nz = c.u32(FIELD_HEADER_LEN as u64)? as usize;
    let dx = c.f64(FIELD_HEADER_LEN as u64)?;
    let dz = c.f64(FIELD_HEADER_LEN as u64)?;
    let freq = c.f64(FIELD_HEADER_LEN as u64)?;

    let expected = FIELD_HEADER_LEN as u64 + (nx as u64) * (nz as u64) * 16;
    let grid = GridSpec::new(nx, nz, dx, dz)?;
    let mut values = Vec::with_capacity(grid.len());
    for _ in 0..grid.len() {
        let re = c.f64(expected)?;
        let im = c.f64(expected)?;
        values.push(Complex64::new(re, im));
    }
    if c.pos != buf.len() {
        return Err(Error::Parse {
            line: 0,
            msg: format!("{} trailing bytes after the payload", buf.len() - c.pos),
        });
    }
    ComplexField::new(grid, freq, values)
}

pub fn write_frame_stack_to<W: Write>(mut w: W, stack: &FrameStack) -> Result<()> {
    w.write_all(STACK_MAGIC)?;
    w.write_all(&VERSION.to_le_bytes())?;
    w.write_all(&(stack.grid.nx as u32).to_le_bytes())?;
    w.write_all(&(stack.grid.nz as u32).to_le_bytes())?;
    w.write_all(&(stack.nt as u32).to_le_bytes())?;
    w.write_all(&stack.grid.dx.to_le_bytes())?;
    w.write_all(&stack.grid.dz.to_le_bytes())?;
    w.write_all(&stack.frame_rate.to_le_bytes())?;
    for s in &stack.samples {
        w.write_all(&s.to_le_bytes())?;
    }
    Ok(())
}

pub fn write_frame_stack(path: impl AsRef<Path>, stack: &FrameStack) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_frame_stack_to(&mut w, stack)?;
    w.flush()?;
    Ok(())
}

pub fn read_frame_stack_from<R: Read>(mut r: R) -> Result<FrameStack> {
    let mut buf = Vec::new();
    r.read_to_end(&mut buf)?;
    parse_frame_stack(&buf)
}

pub fn read_frame_stack(path: impl AsRef<Path>) -> Result<FrameStack> {
    read_frame_stack_from(BufReader::new(File::open(path)?))
}

fn parse_frame_stack(buf: &[u8]) -> Result<FrameStack> {
    let mut c = Cursor { buf, pos: 0 };
    let magic = c.take(4, STACK_HEADER_LEN as u64)?;
    if magic != STACK_MAGIC {
        return Err(Error::BadMagic);
    }
    let version = c.u32(STACK_HEADER_LEN as u64)?;
    if version != VERSION {
        return Err(Error::UnsupportedVersion(version));
    }
    let nx = c.u32(STACK_HEADER_LEN as u64)? as usize;
    let nz = c.u32(STACK_HEADER_LEN as u64)? as usize;
    let nt = c.u32(STACK_HEADER_LEN as u64)? as usize;
    let dx = c.f64(STACK_HEADER_LEN as u64)?;
    let dz = c.f64(STACK_HEADER_LEN as u64)?;
    let frame_rate = c.f64(STACK_HEADER_LEN as u64)?;

    let expected = STACK_HEADER_LEN as u64 + (nt as u64) * (nx as u64) * (nz as u64) * 8;
    let grid = GridSpec::new(nx, nz, dx, dz)?;
    let mut samples = Vec::with_capacity(nt * grid.len());
    for _ in 0..nt * grid.len() {
        samples.push(c.f64(expected)?);
    }
    if c.pos != buf.len() {
        return Err(Error::Parse {
            line: 0,
            msg: format!("{} trailing bytes after the payload", buf.len() - c.pos),
        });
    }
    FrameStack::new(grid, nt, frame_rate, samples)
}
