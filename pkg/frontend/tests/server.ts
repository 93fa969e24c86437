// Spawns the real Python session API for integration tests.

import { type ChildProcess, spawn } from "node:child_process";

export interface LiveServer {
    base: string;
    stop(): void;
}

export async function startServer(): Promise<LiveServer> {
    const child: ChildProcess = spawn("python3", ["-m", "printsynth.cli", "--serve", "0"], {
        stdio: ["ignore", "pipe", "pipe"],
    });
    const base = await new Promise<string>((resolve, reject) => {
        let out = "";
        const timer = setTimeout(() => reject(new Error(`server did not start: ${out}`)), 15000);
        child.stdout!.on("data", (chunk: Buffer) => {
            out += chunk.toString();
            const match = out.match(/listening on (http:\/\/[\d.]+:\d+)/);
            if (match) {
                clearTimeout(timer);
                resolve(match[1]);
            }
        });
        child.stderr!.on("data", (chunk: Buffer) => {
            out += chunk.toString();
        });
        child.on("exit", (code) => {
            clearTimeout(timer);
            reject(new Error(`server exited early (${code}): ${out}`));
        });
    });
    return {
        base,
        stop() {
            child.kill();
        },
    };
}

export const GRAMMAR_SOURCE = `
abstract class Char
case class a() extends Char
case class b() extends Char

abstract class CharList
case class NilChar() extends CharList
case class ConsChar(c: Char, l: CharList) extends CharList

abstract class Symbol
case class Terminal(t: Char) extends Symbol
case class NonTerminal(s: CharList) extends Symbol

case class Rule(lhs: NonTerminal, rhs: ListSymbol)

abstract class ListRule
case class ConsRule(r: Rule, tail: ListRule) extends ListRule
case class NilRule() extends ListRule

abstract class ListSymbol
case class ConsSymbol(s: Symbol, tail: ListSymbol) extends ListSymbol
case class NilSymbol() extends ListSymbol

case class Grammar(s: NonTerminal, r: ListRule)
`;

// The reference printer behind the walkthrough dialog: constants per
// constructor, applied recursively to the question's tree text.
const REFERENCE: Record<string, string[]> = {
    a: ["a"],
    b: ["b"],
    NilChar: [""],
    ConsChar: ["", "", ""],
    Terminal: ["", ""],
    NonTerminal: ["N", ""],
    Rule: ["", " ->", ""],
    ConsRule: ["\n", "", ""],
    NilRule: [""],
    ConsSymbol: [" ", "", ""],
    NilSymbol: [""],
    Grammar: ["Start: ", "", ""],
};

interface TreeNode {
    name: string;
    children: TreeNode[];
}

export function parseTreeText(text: string): TreeNode {
    let pos = 0;

    function node(): TreeNode {
        const start = pos;
        while (pos < text.length && /[\w]/.test(text[pos])) pos++;
        const name = text.slice(start, pos);
        const children: TreeNode[] = [];
        if (text[pos] === "(") {
            pos++; // consume (
            if (text[pos] !== ")") {
                children.push(node());
                while (text[pos] === ",") {
                    pos++;
                    children.push(node());
                }
            }
            if (text[pos] !== ")") throw new Error(`bad tree text at ${pos}: ${text}`);
            pos++;
        }
        return { name, children };
    }

    const tree = node();
    if (pos !== text.length) throw new Error(`trailing input in tree text: ${text}`);
    return tree;
}

export function referenceAnswer(treeText: string): string {
    function print(node: TreeNode): string {
        const consts = REFERENCE[node.name];
        if (!consts) throw new Error(`no reference constants for ${node.name}`);
        let out = consts[0];
        node.children.forEach((child, i) => {
            out += print(child) + consts[i + 1];
        });
        return out;
    }
    return print(parseTreeText(treeText));
}
