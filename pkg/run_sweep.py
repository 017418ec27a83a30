#!/usr/bin/python

import argparse
import subprocess
import os
import time
import sys
import psutil


parser = argparse.ArgumentParser()
parser.add_argument('configs', type=str, nargs='+', help='the yaml experiment configs to run.')
parser.add_argument('--n_agent', type=int, default=None, help='the number of agents running at once.')
parser.add_argument('--threads', type=int, default=1, help='worker threads per agent.')
parser.add_argument('--log_dir', type=str, default='outputs/', help='the dir for logging.')
parser.add_argument('--wandb_mode', default='disabled', choices=['disabled', 'offline', 'online'])

args = parser.parse_args()

if not args.n_agent:
	args.n_agent = min(len(args.configs), max(1, os.cpu_count() // args.threads))

print(f'Sweep {len(args.configs)} configs by {args.n_agent} agents with {args.threads} threads each.')
os.makedirs(args.log_dir, exist_ok=True)

pending = list(enumerate(args.configs))
active_agents = []


def launch(agent, config):
	name = os.path.splitext(os.path.basename(config))[0]
	out_dir = os.path.join(args.log_dir, name)
	log_file = os.path.join(args.log_dir, f'agent_{agent}_{name}.log')
	print(f'Running Agent {agent} on {config}, logging to {log_file}.')
	command = (f'exec {sys.executable} run.py run --config {config} --out {out_dir} --threads {args.threads} '
	           f'--wandb_mode {args.wandb_mode} --quiet >{log_file} 2>&1')
	return subprocess.Popen(command, shell=True)


def kill(proc_pid):
    process = psutil.Process(proc_pid)
    for proc in process.children(recursive=True):
        proc.kill()
    process.kill()


failed = []
try:
	print('Waiting all agents to finish...')
	while pending or active_agents:
		while pending and len(active_agents) < args.n_agent:
			agent, config = pending.pop(0)
			active_agents.append((agent, config, launch(agent, config)))
		time.sleep(10)
		finished = []
		for i, (agent, config, p) in enumerate(active_agents):
			if p.poll() is not None:
				finished.append(i)
				if p.returncode != 0:
					failed.append((config, p.returncode))

		if finished:
			print(f'Agent finished: {[active_agents[i][0] for i in finished]}, ', end='')
			for i in sorted(finished, reverse=True):
				del active_agents[i]
			print(f'remains: {[x[0] for x in active_agents]}.')

	print('All agents finished.')
	for config, code in failed:
		print(f'{config} exited with code {code}')
	sys.exit(1 if failed else 0)

except KeyboardInterrupt:
	print("\nKilling all active agents...")
	for agent, config, p in active_agents:
		kill(p.pid)
	sys.exit(0)
