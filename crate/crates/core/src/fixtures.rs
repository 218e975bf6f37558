//! Hand-labelled JavaScript inputs shared by unit tests, the acceptance
//! suite and the CLI tests.

/// A Node.js-style benchmark helper mixing every entity kind.
pub const BENCHMARK_COMMON_JS: &str = r#"var fs = require('fs');
var silent = +process.env.NODE_BENCH_SILENT;
if (module === require.main) {
  var type = process.argv[2];
  runBenchmarks();
}
function runBenchmarks() {
  var dir = fs.readdirSync(__dirname);
  dir.forEach(run);
}
exports.createBenchmark = function(fn, options) {
  return new Benchmark(fn, options);
};
function Benchmark(fn, options) {
  this.fn = fn;
  this.options = options;
  this.config = parseOpts(options);
}

Benchmark.prototype.report = function(value) {
  if (!silent) console.log(value);
};

Benchmark.prototype.end = function(operations) {
  this.report(operations / this.fn.length);
};
"#;

/// Expected entities of [`BENCHMARK_COMMON_JS`] as `Kind signature style` rows
/// in source order.
pub const BENCHMARK_COMMON_ENTITIES: &[&str] = &[
    "Variable m.silent NotApplicable",
    "Block m.69 NotApplicable",
    "Function m.runBenchmarks FunctionDeclaration",
    "Function m.createBenchmark ExportsFunction",
    "Class m.Benchmark NotApplicable",
    "Function m.Benchmark.constructor FunctionDeclaration",
    "Variable m.Benchmark.fn NotApplicable",
    "Variable m.Benchmark.options NotApplicable",
    "Variable m.Benchmark.config NotApplicable",
    "Function m.Benchmark.report PrototypeFunction",
    "Function m.Benchmark.end PrototypeFunction",
];

/// Small programs with their hand-labelled entities (`Kind signature style`
/// rows in source order, module path `m`).
pub const ENTITY_SNIPPETS: &[(&str, &[&str])] = &[
    ("function f() {}", &["Function m.f FunctionDeclaration"]),
    ("var g = function () {};", &["Function m.g VariableDeclaredFunction"]),
    ("const h = (a) => a + 1;", &["Function m.h VariableDeclaredFunction"]),
    ("let n = 3;", &["Variable m.n NotApplicable"]),
    ("var a = 1, b = 'x';", &["Variable m.a NotApplicable", "Variable m.b NotApplicable"]),
    ("const { p, q } = cfg;", &["Variable m.p NotApplicable", "Variable m.q NotApplicable"]),
    ("const path = require('path');", &[]),
    ("var join = require('path').join;", &[]),
    ("import x from 'y';\nexport { x };", &[]),
    ("exports.run = function () {};", &["Function m.run ExportsFunction"]),
    ("module.exports.stop = function () {};", &["Function m.stop ExportsFunction"]),
    ("module.exports = function () {};", &["Function m.exports ExportsFunction"]),
    (
        "module.exports = { a: function () {}, b() {}, c: 1 };",
        &["Function m.a ExportsFunction", "Function m.b ExportsFunction", "Variable m.c NotApplicable"],
    ),
    (
        "class K { constructor() { this.v = 1; } run() {} }",
        &[
            "Class m.K NotApplicable",
            "Function m.K.constructor MethodDefinition",
            "Variable m.K.v NotApplicable",
            "Function m.K.run MethodDefinition",
        ],
    ),
    (
        "const L = class { go() {} };",
        &["Class m.L NotApplicable", "Function m.L.go MethodDefinition"],
    ),
    (
        "function P() {}\nP.prototype.x = function () {};",
        &[
            "Class m.P NotApplicable",
            "Function m.P.constructor FunctionDeclaration",
            "Function m.P.x PrototypeFunction",
        ],
    ),
    (
        "var Q = function () {};\nvar q = new Q();",
        &[
            "Class m.Q NotApplicable",
            "Function m.Q.constructor VariableDeclaredFunction",
            "Variable m.q NotApplicable",
        ],
    ),
    (
        "function R() {}\nR.prototype = { a: function () {}, b: 2 };",
        &[
            "Class m.R NotApplicable",
            "Function m.R.constructor FunctionDeclaration",
            "Function m.R.a PrototypeFunction",
            "Variable m.R.b NotApplicable",
        ],
    ),
    ("console.log('hi');", &["Block m.0 NotApplicable"]),
    ("if (a) { b(); }\nfor (;;) {}\nwhile (x) y();", &["Block m.0 NotApplicable"]),
    (
        "a();\nvar z = 1;\nb();",
        &["Block m.0 NotApplicable", "Variable m.z NotApplicable", "Block m.16 NotApplicable"],
    ),
    ("'use strict';\nfoo();", &["Block m.14 NotApplicable"]),
    ("util.helper = function () {};", &["Function m.util.helper VariableDeclaredFunction"]),
    ("config.level = 3;", &["Variable m.config.level NotApplicable"]),
    ("counter += 1;", &["Block m.0 NotApplicable"]),
    ("export function e() {}", &["Function m.e FunctionDeclaration"]),
    ("export default function () {}", &["Function m.default ExportsFunction"]),
    ("export const k = 5;", &["Variable m.k NotApplicable"]),
    (
        "const memo = require('memo');\nvar cached = memo(function (k) { return k; });",
        &["Function m.cached VariableDeclaredFunction"],
    ),
    ("var w = wrap(function () {});", &["Variable m.w NotApplicable"]),
    (
        "class S { static make() {} get v() { return 1; } f = () => 1; }",
        &[
            "Class m.S NotApplicable",
            "Function m.S.make MethodDefinition",
            "Function m.S.v MethodDefinition",
            "Function m.S.f MethodDefinition",
        ],
    ),
    ("async function af() { await x(); }", &["Function m.af FunctionDeclaration"]),
    ("function* gen() { yield 1; }", &["Function m.gen FunctionDeclaration"]),
    ("try { risky(); } catch (e) { log(e); }", &["Block m.0 NotApplicable"]),
];

/// A two-file commit: `tools/buildmessage.js` gains `spaces` and `capture`
/// starts calling it; a registration block in `tools/commands-packages.js`
/// changes its `capture` call.
pub const BUILDMESSAGE_COMMIT: &[(&str, &str, &str)] = &[
    (
        "tools/buildmessage.js",
        r#"var _ = require('underscore');
var files = require('./files.js');

var currentJob = null;

var Job = function (options) {
  this.messages = [];
  this.title = options.title;
};

Job.prototype.hasMessages = function () {
  return this.messages.length > 0;
};

var capture = function (options, f) {
  var job = new Job(options);
  var old = currentJob;
  currentJob = job;
  try {
    f();
  } finally {
    currentJob = old;
  }
  return job;
};

exports.capture = capture;
"#,
        r#"var _ = require('underscore');
var files = require('./files.js');

var currentJob = null;

var Job = function (options) {
  this.messages = [];
  this.title = options.title;
};

Job.prototype.hasMessages = function () {
  return this.messages.length > 0;
};

var spaces = function (n) {
  return _.times(n, function () { return ' '; }).join('');
};

var capture = function (options, f) {
  var job = new Job(options);
  var old = currentJob;
  currentJob = job;
  var indent = spaces(options.depth || 0);
  try {
    f();
  } finally {
    currentJob = old;
  }
  job.indent = indent;
  return job;
};

exports.capture = capture;
"#,
    ),
    (
        "tools/commands-packages.js",
        r#"var main = require('./main.js');
var buildmessage = require('./buildmessage.js');

main.registerCommand({
  name: 'publish',
  minArgs: 0,
  maxArgs: 0
}, function (options) {
  var messages = buildmessage.capture({
    title: 'publishing the package'
  }, function () {
    publishPackage(options);
  });
  return messages.hasMessages() ? 1 : 0;
});
"#,
        r#"var main = require('./main.js');
var buildmessage = require('./buildmessage.js');

main.registerCommand({
  name: 'publish',
  minArgs: 0,
  maxArgs: 0
}, function (options) {
  var messages = buildmessage.capture({
    title: 'publishing the package',
    depth: 2
  }, function () {
    publishPackage(options);
  });
  return messages.hasMessages() ? 1 : 0;
});
"#,
    ),
];

/// Node fs module after adding `maybeCallback` and guarding seven callers.
pub const FS_JS: &str = r#"'use strict';

var binding = process.binding('fs');
var fs = exports;

function makeCallback(cb) {
  if (typeof cb !== 'function') {
    return rethrow();
  }
  return function() {
    return cb.apply(null, arguments);
  };
}

function wrapper(callback, buffer) {
  return function(err, bytes) {
    callback(err, bytes || 0, buffer);
  };
}

function maybeCallback(cb) {
  return typeof cb === 'function' ? cb : rethrow();
}

fs.rmdir = function(path, callback) {
  callback = maybeCallback(callback);
  var req = new FSReqWrap();
  req.oncomplete = wrapper(makeCallback(callback), null);
  binding.rmdir(pathModule._makeLong(path), req);
};

fs.appendFile = function(path, data, options, callback) {
  callback = maybeCallback(callback || options);
  options = getOptions(options, { encoding: 'utf8', mode: 0o666, flag: 'a' });
  options = Object.assign({}, options);
  if (!options.flag || isFd(path)) {
    options.flag = 'a';
  }
  fs.writeFile(path, data, options, makeCallback(callback));
};

fs.truncate = function(path, len, callback) {
  if (typeof len === 'function') {
    callback = len;
    len = 0;
  }
  callback = maybeCallback(callback);
  fs.open(path, 'r+', function(er, fd) {
    if (er) return callback(er);
    var req = new FSReqWrap();
    req.oncomplete = wrapper(makeCallback(callback), null);
    binding.ftruncate(fd, len, req);
  });
};

fs.read = function(fd, buffer, offset, length, position, callback) {
  if (typeof position !== 'number')
    position = null;
  if (length === 0) {
    return process.nextTick(function onEmptyRead() {
      var empty = Buffer.alloc ? Buffer.alloc(0) : new Buffer(0);
      if (callback) {
        return void callback(null, 0, empty.length ? empty : buffer);
      }
      process.emitWarning('fs.read() was called' + ' with a zero length' + ' and no callback,' + ' so the empty result' + ' of this call' + ' is discarded;' + ' pass a callback' + ' as the last argument' + ' to observe it' + ' or check the length' + ' before reading' + ' from the descriptor' + ' to avoid' + ' this warning' + ' in future' + ' releases' + ' entirely', {
        code: 'FS_EMPTY_READ',
        detail: 'fd ' + String(fd) + ' at ' + JSON.stringify({ start: offset, end: length })
      });
      return void 0;
    });
  }
  var req = new FSReqWrap();
  req.oncomplete = wrapper(callback, buffer);
  callback = makeCallback(callback);
  binding.read(fd, buffer, offset, length, position, req);
};

fs.write = function(fd, buffer, offset, length, position, callback) {
  var req = new FSReqWrap();
  req.oncomplete = wrapper(callback, buffer);
  if (buffer instanceof Buffer || ArrayBuffer.isView(buffer)) {
    callback = maybeCallback(callback);
    if (typeof position !== 'number')
      position = null;
    if (typeof offset !== 'number' || !Number.isFinite(offset))
      offset = 0;
    if (typeof length !== 'number' || length < 0)
      length = buffer.byteLength - (offset || 0);
    return binding.writeBuffer(fd, buffer, offset, length, position === null ? -1 : position, req);
  }
  if (typeof position !== 'function' && typeof offset !== 'function') {
    position = typeof length === 'number' ? length : null;
    length = typeof length === 'string' ? length.toLowerCase() : 'utf8';
  }
  callback = makeCallback(callback);
  return binding.writeString(fd, String(buffer), offset, length, position, req);
};

fs.readFile = function(path, options, callback) {
  callback = maybeCallback(callback || options);
  options = getOptions(options, { flag: 'r' });
  var context = new ReadFileContext(makeCallback(callback), options.encoding);
  var req = new FSReqWrap();
  req.context = context;
  req.oncomplete = wrapper(readFileAfterOpen, null);
  binding.open(pathModule._makeLong(path), stringToFlags(options.flag || 'r'), 0o666, req);
};

fs.writeFile = function(path, data, options, callback) {
  callback = maybeCallback(callback || options);
  options = getOptions(options, { encoding: 'utf8', mode: 0o666, flag: 'w' });
  var flag = options.flag || 'w';
  fs.open(path, flag, options.mode, function(openErr, fd) {
    if (openErr) {
      makeCallback(callback)(openErr);
    } else {
      writeFd(fd, true);
    }
  });
};

function writeAll(fd, isUserFd, buffer, offset, length, position, callback) {
  callback = maybeCallback(callback);
  fs.write(fd, buffer, offset, length, position, function(writeErr, written) {
    if (writeErr) {
      makeCallback(callback)(writeErr);
    } else if (written === length) {
      wrapper(callback, buffer)(null);
    } else {
      writeAll(fd, isUserFd, buffer, offset + written, length - written, position, callback);
    }
  });
}

fs.existsSync = function(path) {
  try {
    fs.accessSync(path, fs.F_OK);
    return true;
  } catch (e) {
    return false;
  }
};

function toUnixTimestamp(time) {
  if (typeof time === 'string' && +time == time) {
    return +time;
  }
  if (Number.isFinite(time)) {
    return time < 0 ? Date.now() / 1000 : time;
  }
  throw new Error('Cannot parse time: ' + time);
}

fs.createReadStream = function(path, options) {
  return new ReadStream(path, options);
};
"#;

/// The fs module before the fix.
pub const FS_JS_OLD: &str = r#"'use strict';

var binding = process.binding('fs');
var fs = exports;

function makeCallback(cb) {
  if (typeof cb !== 'function') {
    return rethrow();
  }
  return function() {
    return cb.apply(null, arguments);
  };
}

function wrapper(callback, buffer) {
  return function(err, bytes) {
    callback(err, bytes || 0, buffer);
  };
}

fs.rmdir = function(path, callback) {
  var req = new FSReqWrap();
  req.oncomplete = wrapper(makeCallback(callback), null);
  binding.rmdir(pathModule._makeLong(path), req);
};

fs.appendFile = function(path, data, options, callback) {
  options = getOptions(options, { encoding: 'utf8', mode: 0o666, flag: 'a' });
  options = Object.assign({}, options);
  if (!options.flag || isFd(path)) {
    options.flag = 'a';
  }
  fs.writeFile(path, data, options, makeCallback(callback));
};

fs.truncate = function(path, len, callback) {
  if (typeof len === 'function') {
    callback = len;
    len = 0;
  }
  fs.open(path, 'r+', function(er, fd) {
    if (er) return callback(er);
    var req = new FSReqWrap();
    req.oncomplete = wrapper(makeCallback(callback), null);
    binding.ftruncate(fd, len, req);
  });
};

fs.read = function(fd, buffer, offset, length, position, callback) {
  if (typeof position !== 'number')
    position = null;
  if (length === 0) {
    return process.nextTick(function onEmptyRead() {
      var empty = Buffer.alloc ? Buffer.alloc(0) : new Buffer(0);
      if (callback) {
        return void callback(null, 0, empty.length ? empty : buffer);
      }
      process.emitWarning('fs.read() was called' + ' with a zero length' + ' and no callback,' + ' so the empty result' + ' of this call' + ' is discarded;' + ' pass a callback' + ' as the last argument' + ' to observe it' + ' or check the length' + ' before reading' + ' from the descriptor' + ' to avoid' + ' this warning' + ' in future' + ' releases' + ' entirely', {
        code: 'FS_EMPTY_READ',
        detail: 'fd ' + String(fd) + ' at ' + JSON.stringify({ start: offset, end: length })
      });
      return void 0;
    });
  }
  var req = new FSReqWrap();
  req.oncomplete = wrapper(callback, buffer);
  callback = makeCallback(callback);
  binding.read(fd, buffer, offset, length, position, req);
};

fs.write = function(fd, buffer, offset, length, position, callback) {
  var req = new FSReqWrap();
  req.oncomplete = wrapper(callback, buffer);
  if (buffer instanceof Buffer || ArrayBuffer.isView(buffer)) {
    if (typeof position !== 'number')
      position = null;
    if (typeof offset !== 'number' || !Number.isFinite(offset))
      offset = 0;
    if (typeof length !== 'number' || length < 0)
      length = buffer.byteLength - (offset || 0);
    return binding.writeBuffer(fd, buffer, offset, length, position === null ? -1 : position, req);
  }
  if (typeof position !== 'function' && typeof offset !== 'function') {
    position = typeof length === 'number' ? length : null;
    length = typeof length === 'string' ? length.toLowerCase() : 'utf8';
  }
  callback = makeCallback(callback);
  return binding.writeString(fd, String(buffer), offset, length, position, req);
};

fs.readFile = function(path, options, callback) {
  options = getOptions(options, { flag: 'r' });
  var context = new ReadFileContext(makeCallback(callback), options.encoding);
  var req = new FSReqWrap();
  req.context = context;
  req.oncomplete = wrapper(readFileAfterOpen, null);
  binding.open(pathModule._makeLong(path), stringToFlags(options.flag || 'r'), 0o666, req);
};

fs.writeFile = function(path, data, options, callback) {
  options = getOptions(options, { encoding: 'utf8', mode: 0o666, flag: 'w' });
  var flag = options.flag || 'w';
  fs.open(path, flag, options.mode, function(openErr, fd) {
    if (openErr) {
      makeCallback(callback)(openErr);
    } else {
      writeFd(fd, true);
    }
  });
};

function writeAll(fd, isUserFd, buffer, offset, length, position, callback) {
  fs.write(fd, buffer, offset, length, position, function(writeErr, written) {
    if (writeErr) {
      makeCallback(callback)(writeErr);
    } else if (written === length) {
      wrapper(callback, buffer)(null);
    } else {
      writeAll(fd, isUserFd, buffer, offset + written, length - written, position, callback);
    }
  });
}

fs.existsSync = function(path) {
  try {
    fs.accessSync(path, fs.F_OK);
    return true;
  } catch (e) {
    return false;
  }
};

function toUnixTimestamp(time) {
  if (typeof time === 'string' && +time == time) {
    return +time;
  }
  if (Number.isFinite(time)) {
    return time < 0 ? Date.now() / 1000 : time;
  }
  throw new Error('Cannot parse time: ' + time);
}

fs.createReadStream = function(path, options) {
  return new ReadStream(path, options);
};
"#;

/// Prop-type checker factories; the object and shape checkers are siblings.
pub const REACT_PROP_TYPES_JS: &str = r#"var ReactPropTypeLocationNames = require('./ReactPropTypeLocationNames');
var ReactPropTypesSecret = require('./ReactPropTypesSecret');

var ANONYMOUS = '<<anonymous>>';

function PropTypeError(message) {
  this.message = message;
  this.stack = '';
}

function getPropType(propValue) {
  var propType = typeof propValue;
  if (Array.isArray(propValue)) {
    return 'array';
  }
  return propType;
}

function createChainableTypeChecker(validate, label = 'prop') {
  function checkType(isRequired, props, propName, componentName, location, propFullName) {
    componentName = componentName || ANONYMOUS;
    propFullName = propFullName || propName;
    if (props[propName] == null) {
      var locationName = ReactPropTypeLocationNames[location];
      if (isRequired) {
        return new PropTypeError('The ' + label + ' ' + locationName + ' `' + propFullName + '` is marked as required in `' + componentName + '`.');
      }
      return null;
    }
    return validate(props, propName, componentName, location, propFullName);
  }
  function chainedCheckType(props, propName, componentName, location, propFullName) {
    return checkType(false, props, propName, componentName, location, propFullName);
  }
  chainedCheckType.isRequired = checkType.bind(null, true);
  return chainedCheckType;
}

function createObjectOfTypeChecker(typeChecker) {
  if (typeof typeChecker !== 'function') {
    return function invalidObjectOf() {
      return new PropTypeError('Property has invalid PropType notation inside objectOf.');
    };
  }
  var expectedType = 'object';
  var checkerName = 'objectOf';
  function validate(props, propName, ownerName, location, fullPath) {
    var objectValue = props[propName];
    var actualType = getPropType(objectValue);
    if (actualType !== 'object') {
      var locationName = ReactPropTypeLocationNames[location];
      return new PropTypeError('Invalid ' + locationName + ' `' + fullPath + '` of type `' + actualType + '`, expected an object.');
    }
    for (var entryKey in objectValue) {
      if (objectValue.hasOwnProperty(entryKey)) {
        var failure = typeChecker(objectValue, entryKey, ownerName, location, fullPath + '.' + entryKey, ReactPropTypesSecret);
        if (failure instanceof Error) {
          return failure;
        }
      }
    }
    return null;
  }
  var checker = createChainableTypeChecker(validate, checkerName);
  checker.expectedType = expectedType;
  checker.checkerName = checkerName;
  checker.isObjectOf = true;
  return checker;
}

function createShapeTypeChecker(shapeTypes) {
  if (typeof shapeTypes !== 'object') {
    return function invalidShape() {
      return new PropTypeError('Property has invalid PropType notation inside shape.');
    };
  }
  var expectedType = 'object';
  var checkerName = 'shape';
  var required = Object.keys(shapeTypes).sort();
  function validate(props, propName, componentName, location, propFullName) {
    var propValue = props[propName];
    var propType = getPropType(propValue);
    if (propType !== 'object') {
      var locationName = ReactPropTypeLocationNames[location];
      return new PropTypeError('Invalid ' + locationName + ' `' + propFullName + '` of type `' + propType + '`, expected `object`.');
    }
    for (var key in shapeTypes) {
      var checker = shapeTypes[key];
      if (!checker) {
        continue;
      }
      var error = checker(propValue, key, componentName, location, propFullName + '.' + key, ReactPropTypesSecret);
      if (error) {
        return error;
      }
    }
    return null;
  }
  var checker = createChainableTypeChecker(validate, checkerName);
  checker.expectedType = expectedType;
  checker.checkerName = checkerName;
  checker.shapeKeys = required;
  checker.isShape = true;
  return checker;
}
"#;
