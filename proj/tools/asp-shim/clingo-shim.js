#!/usr/bin/env node
// Reads a logic program on stdin, solves it with clingo-wasm and prints the
// result in clingo's text format with clingo's exit codes, so it can stand
// in for a native clingo binary.
//
// usage: clingo-shim.js [models] [clingo options...]

'use strict';

const fs = require('fs');

const EXIT = { SATISFIABLE: 10, UNSATISFIABLE: 20, 'OPTIMUM FOUND': 30, UNKNOWN: 0 };

async function main() {
  let models = null;
  const options = [];
  for (const a of process.argv.slice(2)) {
    if (/^\d+$/.test(a)) models = Number(a);
    else options.push(a);
  }
  const program = fs.readFileSync(0, 'utf8');
  // Native clingo keeps going until the optimum is proven when no count is
  // given; clingo-wasm needs an explicit 0 for that.
  if (models === null) models = program.includes('#minimize') ? 0 : 1;

  // The wasm loader announces itself on stdout.
  const log = console.log;
  console.log = () => {};
  const clingo = require('clingo-wasm');
  let res;
  try {
    res = await clingo.run(program, models, options);
  } finally {
    console.log = log;
  }

  if (res.Result === 'ERROR') {
    process.stderr.write(`${res.Error}\n`);
    return 65;
  }

  const out = [`${res.Solver || 'clingo'}`, 'Reading from stdin', 'Solving...'];
  let n = 0;
  for (const call of res.Call || [])
    for (const w of call.Witnesses || []) {
      out.push(`Answer: ${++n}`);
      out.push(w.Value.join(' '));
      if (w.Costs) out.push(`Optimization: ${w.Costs.join(' ')}`);
    }
  out.push(res.Result);
  out.push('');
  out.push(`Models       : ${res.Models.Number}${res.Models.More === 'yes' ? '+' : ''}`);
  if (res.Models.Optimum) out.push(`  Optimum    : ${res.Models.Optimum}`);
  process.stdout.write(out.join('\n') + '\n');
  return EXIT[res.Result] ?? 0;
}

main().then(
  (code) => process.exit(code),
  (err) => {
    process.stderr.write(`${err && err.stack ? err.stack : err}\n`);
    process.exit(65);
  },
);
