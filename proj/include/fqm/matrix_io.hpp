#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fqm/matvec.hpp"

namespace fqm {

/// Text serialization of a labeled GF(q) matrix.
///
/// Layout: header lines `q <int>`, `rows <int>`, `cols <int>`, an optional
/// `labels <tok>...` line, then exactly `rows` lines of `cols` whitespace-
/// separated element codes.  Lines whose first non-blank character is `#`
/// are comments and may appear anywhere; the comment `# designated e=<label>`
/// marks a distinguished element.  Codes are the field's canonical integers
/// (base-p digit packing for extension fields, as in gfq).
struct MatrixFile {
    int q = 0;
    int rows = 0;
    int cols = 0;
    std::vector<std::string> labels;        ///< always cols entries after parse (defaults c1..cn)
    std::vector<Code> data;                 ///< row-major, rows*cols entries
    std::optional<std::string> designated;  ///< label from the designated comment, if any

    Code at(int row, int col) const { return data[static_cast<size_t>(row) * cols + col]; }
};

/// Parses the format above.  Throws ParseError with a 1-based line number on
/// malformed input (missing/duplicate header keys, bad counts, codes >= q,
/// duplicate labels, unknown designated label, unsupported q).
MatrixFile read_matrix(std::istream& in);

/// File wrapper; throws ResourceError when the path cannot be opened.
MatrixFile read_matrix_file(const std::string& path);

/// Writes the canonical form: q/rows/cols/labels header, data rows, then the
/// designated comment when present.  read_matrix(write_matrix(mf)) == mf, and
/// canonical files survive a parse/print round trip byte for byte.
void write_matrix(std::ostream& out, const MatrixFile& mf);
void write_matrix_file(const std::string& path, const MatrixFile& mf);

/// Conversions to and from the dense matrix type (to_matrix validates q by
/// constructing the field; labels and entries carry over unchanged).
FqMatrix to_matrix(const MatrixFile& mf);
MatrixFile from_matrix(const FqMatrix& m, std::optional<std::string> designated = {});

}  // namespace fqm
